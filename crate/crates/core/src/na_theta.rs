//! Totally degenerate non-Archimedean theta functions over the Puiseux
//! desk field: period pairings `t`, cocycles `(λ, c)`, Fourier series
//! `f = Σ a_u χ^u` and their tropicalizations.
//!
//! Coefficients are stored on anchor exponents and extended by
//! `a_{u + λ(u′)} = t(u′, u)·c(u′)·a_u`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lattice::{CosetSystem, LatticeError, LatticeVector};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::puiseux::{PuiseuxError, PuiseuxNumber};
use crate::rational::{fmt_rational, half, ExtRational, Rational};
use crate::trop_av::{TropAvError, TropPoint, TropicalPolarizationData};
use crate::trop_theta::{
    difference_to_periodic, AutomorphyFactor, ExpressionTerm, PeriodicPLFunction, ProfileEntry, ThetaError,
    TropicalThetaExpression, TropicalThetaFunction, ValuationProfile,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NaError {
    #[error("period entry ({0}, {1}) must be a single term with positive coefficient")]
    BadPeriodEntry(usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("the Riemann theta function needs |det Lambda| = 1")]
    NotPrincipal,
    #[error("the exponent form P*Lambda is not symmetric positive-definite")]
    NotAmple,
    #[error("theta function has no nonzero coefficient")]
    ZeroFunction,
    #[error("coordinate {0} of the point is zero")]
    ZeroCoordinate(usize),
    #[error("coordinate {0} of the point is not a single term")]
    NonMonomial(usize),
    #[error("cutoff {cutoff} is below the minimal term valuation {minimum}")]
    CutoffBelowMinimum { cutoff: String, minimum: String },
    #[error("numerator and denominator have different periods or cocycles")]
    CocycleMismatch,
    #[error("denominator vanishes identically")]
    ZeroDenominator,
    #[error("cocycle generators have nonzero valuation but Lambda = 0")]
    NontrivialRationalCocycle,
    #[error(transparent)]
    Puiseux(#[from] PuiseuxError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    TropAv(#[from] TropAvError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

fn mono(c: &PuiseuxNumber) -> (Rational, Rational) {
    let (a, e) = &c.terms()[0];
    (a.clone(), e.clone())
}

/// `Π x_k^{e_k}` for monomials `x_k`.
fn mono_product(factors: &[(&PuiseuxNumber, i64)]) -> PuiseuxNumber {
    let mut coeff = Rational::one();
    let mut exp = Rational::zero();
    for (x, k) in factors {
        if *k == 0 {
            continue;
        }
        let (c, e) = mono(x);
        let base = if *k > 0 { c } else { c.recip() };
        coeff *= num_traits::pow(base, k.unsigned_abs() as usize);
        exp += e * Rational::from_integer((*k).into());
    }
    PuiseuxNumber::monomial(coeff, exp)
}

/// `T[i][j] = t(e′_i, e_j)`, single terms with positive coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodMatrix {
    entries: Vec<Vec<PuiseuxNumber>>,
    exponents: RatMatrix,
}

impl PeriodMatrix {
    pub fn new(entries: Vec<Vec<PuiseuxNumber>>) -> Result<Self, NaError> {
        let g = entries.len();
        let mut exps = Vec::with_capacity(g);
        for (i, row) in entries.iter().enumerate() {
            if row.len() != g {
                return Err(NaError::ShapeMismatch(format!("T row {i} has {} entries, expected {g}", row.len())));
            }
            let mut r = Vec::with_capacity(g);
            for (j, x) in row.iter().enumerate() {
                match x.terms() {
                    [(c, e)] if c.is_positive() => r.push(e.clone()),
                    _ => return Err(NaError::BadPeriodEntry(i, j)),
                }
            }
            exps.push(r);
        }
        let exponents = RatMatrix::from_rows(exps).map_err(|e| NaError::ShapeMismatch(e.to_string()))?;
        Ok(PeriodMatrix { entries, exponents })
    }

    /// `T = q^P` entrywise.
    pub fn from_exponents(p: &RatMatrix) -> Self {
        let entries = p.to_rows().into_iter().map(|r| r.into_iter().map(PuiseuxNumber::q_pow).collect()).collect();
        PeriodMatrix { entries, exponents: p.clone() }
    }

    pub fn g(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<PuiseuxNumber>] {
        &self.entries
    }

    /// `val T`, the tropical pairing `P`.
    pub fn exponents(&self) -> &RatMatrix {
        &self.exponents
    }

    /// `t(u′, u) = Π T_ij^{n′_i n_j}`
    pub fn t(&self, mprime: &[i64], m: &[i64]) -> PuiseuxNumber {
        let g = self.g();
        let mut factors = Vec::with_capacity(g * g);
        for i in 0..g {
            for j in 0..g {
                factors.push((&self.entries[i][j], mprime[i] * m[j]));
            }
        }
        mono_product(&factors)
    }
}

/// `(λ, c)` with `c` determined by its generator values `c_i = c(e′_i)` and
/// `d_ij = t(e′_i, λ(e′_j))`:
/// `c(n) = Π c_i^{n_i} · Π_i d_ii^{n_i(n_i−1)/2} · Π_{i<j} d_ij^{n_i n_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NACocycle {
    lambda: IntMatrix,
    generators: Vec<PuiseuxNumber>,
    pair_values: Vec<Vec<PuiseuxNumber>>,
}

impl NACocycle {
    pub fn from_period(period: &PeriodMatrix, lambda: IntMatrix, generators: Vec<PuiseuxNumber>) -> Result<Self, NaError> {
        let g = period.g();
        let d = (0..g)
            .map(|i| {
                let mut e = vec![0i64; g];
                e[i] = 1;
                (0..g).map(|j| period.t(&e, &lambda.column(j))).collect()
            })
            .collect();
        Self::with_pair_values(lambda, generators, d)
    }

    /// Explicit pair values, for cocycles not derived from a period.
    pub fn with_pair_values(
        lambda: IntMatrix,
        generators: Vec<PuiseuxNumber>,
        pair_values: Vec<Vec<PuiseuxNumber>>,
    ) -> Result<Self, NaError> {
        let g = generators.len();
        if lambda.rows() != g || lambda.cols() != g || pair_values.len() != g || pair_values.iter().any(|r| r.len() != g) {
            return Err(NaError::ShapeMismatch(format!("cocycle data must be {g}x{g}")));
        }
        for x in generators.iter().chain(pair_values.iter().flatten()) {
            if !x.is_monomial() {
                return Err(PuiseuxError::NotMonomial.into());
            }
        }
        Ok(NACocycle { lambda, generators, pair_values })
    }

    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    pub fn generators(&self) -> &[PuiseuxNumber] {
        &self.generators
    }

    pub fn g(&self) -> usize {
        self.generators.len()
    }

    pub fn value(&self, n: &[i64]) -> PuiseuxNumber {
        let g = self.g();
        let mut factors: Vec<(&PuiseuxNumber, i64)> = Vec::new();
        for i in 0..g {
            factors.push((&self.generators[i], n[i]));
            factors.push((&self.pair_values[i][i], n[i] * (n[i] - 1) / 2));
            for j in i + 1..g {
                factors.push((&self.pair_values[i][j], n[i] * n[j]));
            }
        }
        mono_product(&factors)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleFailure {
    pub n1: LatticeVector,
    pub n2: LatticeVector,
    pub lhs: PuiseuxNumber,
    pub rhs: PuiseuxNumber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub checked: usize,
    pub failures: Vec<CocycleFailure>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `c(n₁+n₂)·c(n₁)⁻¹·c(n₂)⁻¹ = t(n₁, λ(n₂))` on all generator pairs
/// and 20 seeded pairs with entries in `[−4, 4]`, plus `c(0) = 1`.
pub fn verify_cocycle(cocycle: &NACocycle, period: &PeriodMatrix, seed: u64) -> CocycleReport {
    let g = cocycle.g();
    let mut pairs = Vec::new();
    for i in 0..g {
        for j in 0..g {
            let mut a = vec![0i64; g];
            let mut b = vec![0i64; g];
            a[i] = 1;
            b[j] = 1;
            pairs.push((a, b));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let a = (0..g).map(|_| rng.gen_range(-4..=4)).collect();
        let b = (0..g).map(|_| rng.gen_range(-4..=4)).collect();
        pairs.push((a, b));
    }
    let mut failures = Vec::new();
    let zero = vec![0i64; g];
    if cocycle.value(&zero) != PuiseuxNumber::one() {
        failures.push(CocycleFailure { n1: zero.clone(), n2: zero, lhs: cocycle.value(&vec![0; g]), rhs: PuiseuxNumber::one() });
    }
    for (a, b) in &pairs {
        let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let lhs = mono_product(&[(&cocycle.value(&sum), 1), (&cocycle.value(a), -1), (&cocycle.value(b), -1)]);
        let rhs = period.t(a, &cocycle.lambda.mul_vec(b));
        if lhs != rhs {
            failures.push(CocycleFailure { n1: a.clone(), n2: b.clone(), lhs, rhs });
        }
    }
    CocycleReport { checked: pairs.len() + 1, failures }
}

/// Whether the term at `u` beats every other at the evaluation point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    Unique,
    Tied,
}

/// `f = Σ a_u χ^u` with coefficients given on anchors.
///
/// With `Λ` nonsingular, a coefficient off the anchors is extended from the
/// smallest anchor in its coset; anchors overriding the rule are kept, which
/// is what [`verify_invariance`] detects. With `Λ = 0` the anchors are the
/// whole (finite) support.
#[derive(Clone, Debug)]
pub struct NAThetaFunction {
    period: Arc<PeriodMatrix>,
    cocycle: Arc<NACocycle>,
    anchors: BTreeMap<LatticeVector, PuiseuxNumber>,
    cosets: Option<CosetSystem>,
    trop: OnceLock<Result<TropicalThetaFunction, NaError>>,
}

impl PartialEq for NAThetaFunction {
    fn eq(&self, other: &Self) -> bool {
        self.period == other.period && self.cocycle == other.cocycle && self.anchors == other.anchors
    }
}

impl NAThetaFunction {
    pub fn new(
        period: Arc<PeriodMatrix>,
        cocycle: Arc<NACocycle>,
        anchors: BTreeMap<LatticeVector, PuiseuxNumber>,
    ) -> Result<Self, NaError> {
        let g = period.g();
        if cocycle.g() != g {
            return Err(NaError::ShapeMismatch(format!("cocycle has rank {}, period has rank {g}", cocycle.g())));
        }
        if let Some(k) = anchors.keys().find(|k| k.len() != g) {
            return Err(NaError::ShapeMismatch(format!("coefficient index {k:?} has wrong length")));
        }
        if anchors.values().all(PuiseuxNumber::is_zero) {
            return Err(NaError::ZeroFunction);
        }
        let cosets = if cocycle.lambda.is_zero() { None } else { Some(CosetSystem::new(&cocycle.lambda)?) };
        Ok(NAThetaFunction { period, cocycle, anchors, cosets, trop: OnceLock::new() })
    }

    pub fn period(&self) -> &Arc<PeriodMatrix> {
        &self.period
    }

    pub fn cocycle(&self) -> &Arc<NACocycle> {
        &self.cocycle
    }

    pub fn anchors(&self) -> &BTreeMap<LatticeVector, PuiseuxNumber> {
        &self.anchors
    }

    pub fn g(&self) -> usize {
        self.period.g()
    }

    /// Returns a copy with one anchor replaced (used for negative controls).
    pub fn with_anchor(&self, u: LatticeVector, a: PuiseuxNumber) -> Result<Self, NaError> {
        let mut anchors = self.anchors.clone();
        anchors.insert(u, a);
        Self::new(self.period.clone(), self.cocycle.clone(), anchors)
    }

    /// `a_u`
    pub fn coefficient(&self, u: &[i64]) -> PuiseuxNumber {
        if let Some(a) = self.anchors.get(u) {
            return a.clone();
        }
        let Some(cosets) = &self.cosets else { return PuiseuxNumber::zero() };
        let (class, n) = cosets.reduce(u);
        for (anchor, a) in &self.anchors {
            let (ac, m) = cosets.reduce(anchor);
            if ac == class {
                // u = anchor + Λ(n − m)
                let d: Vec<i64> = n.iter().zip(&m).map(|(x, y)| x - y).collect();
                if a.is_zero() {
                    return PuiseuxNumber::zero();
                }
                return &(&self.period.t(&d, anchor) * &self.cocycle.value(&d)) * a;
            }
        }
        PuiseuxNumber::zero()
    }

    /// `f_trop` over the tropical data `(val T, Λ)`.
    pub fn tropicalize(&self) -> Result<TropicalThetaFunction, NaError> {
        self.trop.get_or_init(|| self.compute_tropicalization()).clone()
    }

    fn compute_tropicalization(&self) -> Result<TropicalThetaFunction, NaError> {
        let g = self.g();
        let p = self.period.exponents().clone();
        let lambda = self.cocycle.lambda.clone();
        let val = |x: &PuiseuxNumber| x.val();
        match &self.cosets {
            None => {
                if self.cocycle.generators.iter().any(|c| c.val() != ExtRational::Finite(Rational::zero())) {
                    return Err(NaError::NontrivialRationalCocycle);
                }
                let base = Arc::new(TropicalPolarizationData::unpolarized(p)?);
                let entries =
                    self.anchors.iter().map(|(u, a)| ProfileEntry { rep: u.clone(), w: val(a) }).collect();
                Ok(TropicalThetaFunction::new(base, AutomorphyFactor::trivial(g), ValuationProfile::new(entries))?)
            }
            Some(cosets) => {
                let beta = p.mul_int(&lambda);
                let ell = (0..g)
                    .map(|i| {
                        let v = self.cocycle.generators[i].val();
                        v.finite().expect("monomial generator") - half() * &beta[(i, i)]
                    })
                    .collect();
                let base = Arc::new(TropicalPolarizationData::new(p, lambda.clone())?);
                let entries = cosets
                    .representatives()
                    .into_iter()
                    .map(|r| {
                        let w = val(&self.coefficient(&r));
                        ProfileEntry { rep: r, w }
                    })
                    .collect();
                Ok(TropicalThetaFunction::new(base, AutomorphyFactor::new(lambda, ell), ValuationProfile::new(entries))?)
            }
        }
    }

    /// Partial sum of `a_u x^u` over all terms of valuation `≤ cutoff`.
    pub fn evaluate_at_point(&self, x: &[PuiseuxNumber], cutoff: &Rational) -> Result<(PuiseuxNumber, Dominance), NaError> {
        let g = self.g();
        if x.len() != g {
            return Err(NaError::ShapeMismatch(format!("point has {} coordinates, expected {g}", x.len())));
        }
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                return Err(NaError::ZeroCoordinate(i));
            }
            if !c.is_monomial() {
                return Err(NaError::NonMonomial(i));
            }
        }
        let v = TropPoint::new(x.iter().map(|c| c.val().finite().expect("nonzero").clone()).collect());
        let trop = self.tropicalize()?;
        let minimum = trop.value(&v)?;
        if *cutoff < minimum {
            return Err(NaError::CutoffBelowMinimum { cutoff: fmt_rational(cutoff), minimum: fmt_rational(&minimum) });
        }
        let support: Vec<LatticeVector> = match (&self.cosets, trop.minimizer()) {
            (Some(_), Some(minimizer)) => {
                let lambda = &self.cocycle.lambda;
                let lam_t = lambda.transpose().to_rational();
                let lam_v = lam_t.mul_vec(&v.coords);
                let form = minimizer.form();
                let mut out = Vec::new();
                for entry in &trop.profile().entries {
                    let Some(w) = entry.w.finite() else { continue };
                    let pr = self.period.exponents().mul_int_vec(&entry.rep);
                    let linear: Vec<Rational> =
                        (0..g).map(|i| &trop.factor().ell[i] + &pr[i] + &lam_v[i]).collect();
                    // ½nᵀBn + Lᵀn + k = ½(n − z)ᵀB(n − z) + k − ½ zᵀBz with Bz = −L
                    let neg: Vec<Rational> = linear.iter().map(|l| -l).collect();
                    let z = form.ldlt().solve(&neg);
                    let floor = w + v.pair(&entry.rep) - form.half_norm(&z);
                    let radius = cutoff - floor;
                    if radius.is_negative() {
                        continue;
                    }
                    for n in minimizer.enumerate_below(&z, &radius)? {
                        let ln = lambda.mul_vec(&n);
                        out.push(entry.rep.iter().zip(ln).map(|(a, b)| a + b).collect());
                    }
                }
                out
            }
            _ => self.anchors.keys().cloned().collect(),
        };
        let mut sum = PuiseuxNumber::zero();
        let mut best: Option<Rational> = None;
        let mut count = 0;
        for u in support {
            let a = self.coefficient(&u);
            if a.is_zero() {
                continue;
            }
            let xu: Vec<(&PuiseuxNumber, i64)> = x.iter().zip(&u).map(|(c, &k)| (c, k)).collect();
            let term = &a * &mono_product(&xu);
            let tv = term.val().finite().expect("nonzero term").clone();
            if tv > *cutoff {
                continue;
            }
            match &best {
                Some(b) if tv > *b => {}
                Some(b) if tv == *b => count += 1,
                _ => {
                    best = Some(tv);
                    count = 1;
                }
            }
            sum = &sum + &term;
        }
        let dominance = if count == 1 { Dominance::Unique } else { Dominance::Tied };
        Ok((sum, dominance))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceFailure {
    pub mprime: LatticeVector,
    pub u: LatticeVector,
    pub expected: PuiseuxNumber,
    pub found: PuiseuxNumber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub checked: usize,
    pub failures: Vec<InvarianceFailure>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `a_{u + λ(u′)} = t(u′, u)·c(u′)·a_u` at each `(u′, u)`.
pub fn verify_invariance(f: &NAThetaFunction, samples: &[(LatticeVector, LatticeVector)]) -> InvarianceReport {
    let mut failures = Vec::new();
    for (n, u) in samples {
        let moved: Vec<i64> = u.iter().zip(f.cocycle.lambda.mul_vec(n)).map(|(a, b)| a + b).collect();
        let found = f.coefficient(&moved);
        let expected = &(&f.period.t(n, u) * &f.cocycle.value(n)) * &f.coefficient(u);
        if found != expected {
            failures.push(InvarianceFailure { mprime: n.clone(), u: u.clone(), expected, found });
        }
    }
    InvarianceReport { checked: samples.len(), failures }
}

/// Every anchor against every generator shift `±e′_i`, plus seeded pairs.
pub fn invariance_samples(f: &NAThetaFunction, extra: usize, seed: u64) -> Vec<(LatticeVector, LatticeVector)> {
    let g = f.g();
    let mut out = Vec::new();
    for u in f.anchors.keys() {
        for i in 0..g {
            for s in [1, -1] {
                let mut n = vec![0i64; g];
                n[i] = s;
                out.push((n, u.clone()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        let n = (0..g).map(|_| rng.gen_range(-3..=3)).collect();
        let u = (0..g).map(|_| rng.gen_range(-4..=4)).collect();
        out.push((n, u));
    }
    out
}

/// `Σ_{u′} √t(u′, λ(u′)) χ^{λ(u′)}` with the square roots fixed on generators.
pub fn build_riemann_theta(period: &PeriodMatrix, lambda: &IntMatrix) -> Result<NAThetaFunction, NaError> {
    let g = period.g();
    if lambda.rows() != g || lambda.cols() != g {
        return Err(NaError::ShapeMismatch(format!("Lambda must be {g}x{g}")));
    }
    if lambda.determinant().abs() != 1 {
        return Err(NaError::NotPrincipal);
    }
    let probe = NACocycle::from_period(period, lambda.clone(), vec![PuiseuxNumber::one(); g])?;
    let generators = (0..g).map(|i| probe.pair_values[i][i].sqrt_monomial()).collect::<Result<Vec<_>, _>>()?;
    let cocycle = NACocycle { generators, ..probe };
    let mut anchors = BTreeMap::new();
    anchors.insert(vec![0; g], PuiseuxNumber::one());
    NAThetaFunction::new(Arc::new(period.clone()), Arc::new(cocycle), anchors)
}

/// One theta function per coset of `M/λ(M′)`, with `a = 1` on its
/// representative and `0` on the others.
pub fn theta_basis(period: &PeriodMatrix, cocycle: &NACocycle) -> Result<Vec<NAThetaFunction>, NaError> {
    let beta = period.exponents().mul_int(&cocycle.lambda);
    if crate::lattice::GramForm::new(beta).is_err() {
        return Err(NaError::NotAmple);
    }
    let cosets = CosetSystem::new(&cocycle.lambda)?;
    let (period, cocycle) = (Arc::new(period.clone()), Arc::new(cocycle.clone()));
    let reps = cosets.representatives();
    reps.iter()
        .map(|r| {
            let anchors = reps
                .iter()
                .map(|s| (s.clone(), if s == r { PuiseuxNumber::one() } else { PuiseuxNumber::zero() }))
                .collect();
            NAThetaFunction::new(period.clone(), cocycle.clone(), anchors)
        })
        .collect()
}

/// `h = f₁/f₂`; the normalization scalar of the construction is recorded
/// (it is `1` here since both functions are taken as given).
#[derive(Clone, Debug)]
pub struct NARationalFunction {
    pub numerator: NAThetaFunction,
    pub denominator: NAThetaFunction,
    pub normalization: PuiseuxNumber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientValue {
    pub val: ExtRational,
    pub numerator: Dominance,
    pub denominator: Dominance,
}

impl NARationalFunction {
    /// `val(f₁(x)) − val(f₂(x))` from partial sums up to the cutoff.
    pub fn quotient_valuation(&self, x: &[PuiseuxNumber], cutoff: &Rational) -> Result<QuotientValue, NaError> {
        let (num, dn) = self.numerator.evaluate_at_point(x, cutoff)?;
        let (den, dd) = self.denominator.evaluate_at_point(x, cutoff)?;
        let val = match (num.val(), den.val()) {
            (_, ExtRational::Infinity) => return Err(NaError::ZeroDenominator),
            (ExtRational::Infinity, _) => ExtRational::Infinity,
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a - b),
        };
        Ok(QuotientValue { val, numerator: dn, denominator: dd })
    }
}

pub fn construct_rational_function(
    f1: &NAThetaFunction,
    f2: &NAThetaFunction,
) -> Result<(NARationalFunction, PeriodicPLFunction), NaError> {
    if f1.period != f2.period || f1.cocycle != f2.cocycle {
        return Err(NaError::CocycleMismatch);
    }
    if f2.anchors.values().all(PuiseuxNumber::is_zero) {
        return Err(NaError::ZeroDenominator);
    }
    let t1 = Arc::new(f1.tropicalize()?);
    let t2 = Arc::new(f2.tropicalize()?);
    let origin = TropPoint::origin(f1.g());
    let expr = TropicalThetaExpression::new(vec![
        ExpressionTerm { multiplicity: 1, shift: origin.clone(), theta: t1 },
        ExpressionTerm { multiplicity: -1, shift: origin, theta: t2 },
    ])?;
    let h_trop = difference_to_periodic(expr)?;
    let h = NARationalFunction { numerator: f1.clone(), denominator: f2.clone(), normalization: PuiseuxNumber::one() };
    Ok((h, h_trop))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::trop_theta::riemann_theta;

    fn p(s: &str) -> PuiseuxNumber {
        s.parse().unwrap()
    }

    fn period(rows: &[&[&str]]) -> PeriodMatrix {
        PeriodMatrix::new(rows.iter().map(|r| r.iter().map(|s| p(s)).collect()).collect()).unwrap()
    }

    #[test]
    fn riemann_coefficients() {
        let t = period(&[&["q^2"]]);
        let f = build_riemann_theta(&t, &IntMatrix::identity(1)).unwrap();
        for n in -5i64..=5 {
            assert_eq!(f.coefficient(&[n]), PuiseuxNumber::q_pow(int(n * n)));
        }
        assert_eq!(f.coefficient(&[0]), PuiseuxNumber::one());

        let t2 = period(&[&["q^2", "q"], &["q", "q^2"]]);
        let f2 = build_riemann_theta(&t2, &IntMatrix::identity(2)).unwrap();
        assert_eq!(f2.coefficient(&[1, 1]), p("q^3"));
        assert!(matches!(build_riemann_theta(&t, &IntMatrix::from_ints(&[&[2]])), Err(NaError::NotPrincipal)));
        let odd = period(&[&["2*q^2"]]);
        assert!(matches!(
            build_riemann_theta(&odd, &IntMatrix::identity(1)),
            Err(NaError::Puiseux(PuiseuxError::CoefficientNotASquare(_)))
        ));
    }

    #[test]
    fn cocycle_checks() {
        let t = period(&[&["q^2"]]);
        let f = build_riemann_theta(&t, &IntMatrix::identity(1)).unwrap();
        assert!(verify_cocycle(f.cocycle(), &t, 1).passed());

        let ones = period(&[&["1", "1"], &["1", "1"]]);
        let triv = NACocycle::from_period(&ones, IntMatrix::identity(2), vec![p("1"), p("1")]).unwrap();
        assert!(verify_cocycle(&triv, &ones, 2).passed());

        // c(n) = q^n against T = [[q²]]
        let bad = NACocycle::with_pair_values(IntMatrix::identity(1), vec![p("q")], vec![vec![p("1")]]).unwrap();
        let r = verify_cocycle(&bad, &t, 3);
        let first = &r.failures[0];
        assert_eq!((first.n1.clone(), first.n2.clone()), (vec![1], vec![1]));
        assert_eq!((first.lhs.clone(), first.rhs.clone()), (p("1"), p("q^2")));
    }

    #[test]
    fn invariance_and_corruption() {
        let t = period(&[&["q^2"]]);
        let f = build_riemann_theta(&t, &IntMatrix::identity(1)).unwrap();
        let r = verify_invariance(&f, &[(vec![1], vec![0]), (vec![0], vec![3])]);
        assert!(r.passed());
        assert_eq!(f.coefficient(&[1]), p("q"));
        let bad = f.with_anchor(vec![2], p("q^5")).unwrap();
        assert!(!verify_invariance(&bad, &invariance_samples(&bad, 10, 4)).passed());
    }

    #[test]
    fn bases() {
        let t = period(&[&["q^2"]]);
        let c = NACocycle::from_period(&t, IntMatrix::from_ints(&[&[2]]), vec![p("q^2")]).unwrap();
        let basis = theta_basis(&t, &c).unwrap();
        assert_eq!(basis.len(), 2);
        for (k, f) in basis.iter().enumerate() {
            assert!(verify_invariance(f, &invariance_samples(f, 20, 5)).passed());
            assert_eq!(f.coefficient(&[k as i64]), PuiseuxNumber::one());
            assert!(f.coefficient(&[1 - k as i64]).is_zero());
        }
        let neg = NACocycle::from_period(&t, IntMatrix::from_ints(&[&[-1]]), vec![p("q")]).unwrap();
        assert!(matches!(theta_basis(&t, &neg), Err(NaError::NotAmple)));
    }

    #[test]
    fn tropicalization_matches_riemann() {
        let t = period(&[&["q^2", "q"], &["q", "q^2"]]);
        let f = build_riemann_theta(&t, &IntMatrix::identity(2)).unwrap();
        let tf = f.tropicalize().unwrap();
        assert!(tf.factor().ell.iter().all(Zero::is_zero));
        let data = Arc::new(TropicalPolarizationData::new(t.exponents().clone(), IntMatrix::identity(2)).unwrap());
        let phi = riemann_theta(&data).unwrap();
        for k in -10..10 {
            let v = TropPoint::new(vec![rat(k, 3), rat(2 * k + 1, 7)]);
            assert_eq!(tf.value(&v).unwrap(), phi.value(&v).unwrap());
        }
        // scaling all coefficients by q shifts by 1
        let scaled = f.with_anchor(vec![0, 0], p("q")).unwrap();
        let v = TropPoint::new(vec![rat(1, 3), rat(1, 5)]);
        assert_eq!(scaled.tropicalize().unwrap().value(&v).unwrap(), phi.value(&v).unwrap() + int(1));
    }

    #[test]
    fn evaluation_at_points() {
        let t = period(&[&["q^2"]]);
        let f = build_riemann_theta(&t, &IntMatrix::identity(1)).unwrap();
        let (sum, dom) = f.evaluate_at_point(&[p("q^(1/3)")], &int(3)).unwrap();
        assert_eq!(dom, Dominance::Unique);
        assert_eq!(sum.val(), ExtRational::Finite(int(0)));
        // terms n with n² + n/3 ≤ 3: n ∈ {−1, 0, 1}
        assert_eq!(sum, p("1 + q^(2/3) + q^(4/3)"));
        let (_, dom) = f.evaluate_at_point(&[p("q")], &int(3)).unwrap();
        assert_eq!(dom, Dominance::Tied);
        assert!(matches!(f.evaluate_at_point(&[p("0")], &int(3)), Err(NaError::ZeroCoordinate(0))));
        assert!(matches!(f.evaluate_at_point(&[p("1 + q")], &int(3)), Err(NaError::NonMonomial(0))));
        assert!(matches!(f.evaluate_at_point(&[p("q")], &int(-1)), Err(NaError::CutoffBelowMinimum { .. })));

        let ones = period(&[&["q"]]);
        let triv = Arc::new(NACocycle::with_pair_values(IntMatrix::zeros(1, 1), vec![p("1")], vec![vec![p("1")]]).unwrap());
        let one = NAThetaFunction::new(Arc::new(ones), triv, [(vec![0], p("1"))].into_iter().collect()).unwrap();
        assert_eq!(one.evaluate_at_point(&[p("3*q^5")], &int(0)).unwrap().0, p("1"));
        assert_eq!(one.tropicalize().unwrap().value(&TropPoint::new(vec![int(4)])).unwrap(), int(0));
    }

    #[test]
    fn rational_functions() {
        let t = period(&[&["q"]]);
        let c = NACocycle::from_period(&t, IntMatrix::from_ints(&[&[2]]), vec![p("q")]).unwrap();
        let basis = theta_basis(&t, &c).unwrap();
        let (_, same) = construct_rational_function(&basis[0], &basis[0]).unwrap();
        assert_eq!(same.evaluate(&TropPoint::new(vec![rat(1, 3)])).unwrap(), int(0));

        let (h, h_trop) = construct_rational_function(&basis[0], &basis[1]).unwrap();
        let values: Vec<Rational> =
            (0..8).map(|k| h_trop.evaluate(&TropPoint::new(vec![rat(k, 4)])).unwrap()).collect();
        assert!(values.iter().any(|x| *x != values[0]));
        for k in 0..8 {
            let v = TropPoint::new(vec![rat(k, 4)]);
            assert_eq!(h_trop.evaluate(&v).unwrap(), h_trop.evaluate(&v.add(&TropPoint::new(vec![int(1)]))).unwrap());
        }
        let x = [p("q^(1/5)")];
        let q = h.quotient_valuation(&x, &int(4)).unwrap();
        assert_eq!((q.numerator, q.denominator), (Dominance::Unique, Dominance::Unique));
        assert_eq!(q.val, ExtRational::Finite(h_trop.evaluate(&TropPoint::new(vec![rat(1, 5)])).unwrap()));

        let other = period(&[&["q^2"]]);
        let c2 = NACocycle::from_period(&other, IntMatrix::from_ints(&[&[2]]), vec![p("q^2")]).unwrap();
        let b2 = theta_basis(&other, &c2).unwrap();
        assert!(matches!(construct_rational_function(&basis[0], &b2[1]), Err(NaError::CocycleMismatch)));
    }
}
