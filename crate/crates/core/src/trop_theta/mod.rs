//! Tropical theta functions as min-plus lattice series.
//!
//! A theta function is stored as an automorphy factor `(Λ, ℓ)` with
//! `c_trop(n) = ½ nᵀ(PΛ)n + ℓᵀn` together with a valuation profile `w` on
//! coset representatives of `M/Λ(M′)`. The profile extends to all of `M` by
//!
//! ```text
//! w(u₀ + Λn) = w(u₀) + c_trop(n) + [n, u₀]
//! ```
//!
//! and the function is `f(v) = min_u { w(u) + ⟨u, v⟩ }`. Each coset
//! contributes one integer convex-quadratic minimization.
//!
//! When `Λ = 0` the profile is a finite list of monomials and `f` is a
//! finite min; these are the candidates for tropicalized rational functions.

mod expression;

pub use expression::{
    difference_to_periodic, expression_automorphy, kummer_check, level_n_function, ExpressionTerm,
    KummerFailure, KummerReport, PeriodicPLFunction, TropicalThetaExpression,
};

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::lattice::{CosetSystem, GramForm, LatticeError, LatticeVector, QuadraticMinimizer};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::rational::{dot_int, fmt_rational, half, ExtRational, Rational};
use crate::trop_av::{TropAvError, TropPoint, TropicalPolarizationData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error("profile has no finite entry")]
    EmptyProfile,
    #[error("the tropical Riemann theta function needs a principal polarization")]
    NotPrincipal,
    #[error("invalid automorphy factor: {0}")]
    InvalidFactor(String),
    #[error("profile has {found} coset representatives, expected {expected}")]
    IncompleteProfile { expected: u64, found: usize },
    #[error("profile representatives {0:?} and {1:?} are congruent")]
    CongruentRepresentatives(LatticeVector, LatticeVector),
    #[error("a function with Λ = 0 needs ℓ = 0 and a finite profile")]
    NontrivialRationalFactor,
    #[error("terms live on different tori")]
    Incompatible,
    #[error("automorphy factor does not cancel: residual Λ = {lambda:?}, ℓ = [{ell}]")]
    NonzeroAutomorphy { lambda: Vec<Vec<i64>>, ell: String },
    #[error("shifts must sum to zero")]
    ShiftsDoNotSumToZero,
    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expression has no terms")]
    EmptyExpression,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    TropAv(#[from] TropAvError),
}

/// `(Λ, ℓ)` with `c_trop(n) = ½ nᵀ(PΛ)n + ℓᵀn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphyFactor {
    pub lambda: IntMatrix,
    pub ell: Vec<Rational>,
}

impl AutomorphyFactor {
    pub fn new(lambda: IntMatrix, ell: Vec<Rational>) -> Self {
        AutomorphyFactor { lambda, ell }
    }

    pub fn trivial(g: usize) -> Self {
        AutomorphyFactor { lambda: IntMatrix::zeros(g, g), ell: vec![Rational::zero(); g] }
    }

    pub fn g(&self) -> usize {
        self.ell.len()
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.is_zero() && self.ell.iter().all(Zero::is_zero)
    }

    pub fn c_trop(&self, pairing: &RatMatrix, n: &[i64]) -> Rational {
        let beta = pairing.mul_int(&self.lambda);
        half() * crate::matrix::bilinear_int(&beta, n, n) + dot_int(n, &self.ell)
    }

    /// Factor of `v ↦ θ(v + shift)`: `ℓ` gains `Λᵀ·shift`.
    pub fn translated(&self, shift: &TropPoint) -> AutomorphyFactor {
        let extra = self.lambda.transpose().to_rational().mul_vec(&shift.coords);
        AutomorphyFactor {
            lambda: self.lambda.clone(),
            ell: self.ell.iter().zip(extra).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scaled(&self, k: i64) -> AutomorphyFactor {
        let kr = Rational::from_integer(k.into());
        AutomorphyFactor { lambda: self.lambda.scale(k), ell: self.ell.iter().map(|x| x * &kr).collect() }
    }

    pub fn plus(&self, other: &AutomorphyFactor) -> AutomorphyFactor {
        AutomorphyFactor {
            lambda: self.lambda.add(&other.lambda),
            ell: self.ell.iter().zip(&other.ell).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn describe_ell(&self) -> String {
        self.ell.iter().map(fmt_rational).collect::<Vec<_>>().join(", ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileEntry {
    pub rep: LatticeVector,
    pub w: ExtRational,
}

/// Values `w` on coset representatives (or, when `Λ = 0`, on a finite support).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationProfile {
    pub entries: Vec<ProfileEntry>,
}

impl ValuationProfile {
    pub fn new(entries: Vec<ProfileEntry>) -> Self {
        ValuationProfile { entries }
    }

    /// The single entry `w(0) = 0`.
    pub fn origin(g: usize) -> Self {
        ValuationProfile { entries: vec![ProfileEntry { rep: vec![0; g], w: ExtRational::Finite(Rational::zero()) }] }
    }

    pub fn finite(&self) -> impl Iterator<Item = (&LatticeVector, &Rational)> {
        self.entries.iter().filter_map(|e| e.w.finite().map(|w| (&e.rep, w)))
    }
}

/// Value of a theta function with every `u ∈ M` attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaValue {
    pub value: Rational,
    pub witnesses: Vec<LatticeVector>,
}

#[derive(Clone, Debug)]
struct AmpleEngine {
    minimizer: QuadraticMinimizer,
    cosets: CosetSystem,
    /// Per profile entry: canonical coset rep, `m` with `rep = canonical + Λm`.
    canonical: Vec<(LatticeVector, LatticeVector)>,
}

#[derive(Clone, Debug)]
enum Engine {
    Ample(Arc<AmpleEngine>),
    Finite,
}

#[derive(Clone, Debug)]
pub struct TropicalThetaFunction {
    base: Arc<TropicalPolarizationData>,
    factor: AutomorphyFactor,
    profile: ValuationProfile,
    /// `PΛ` of the factor.
    beta: RatMatrix,
    /// `P·rep` per profile entry.
    rep_pairings: Vec<Vec<Rational>>,
    lambda_t: RatMatrix,
    engine: Engine,
}

impl PartialEq for TropicalThetaFunction {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.factor == other.factor && self.profile == other.profile
    }
}

impl TropicalThetaFunction {
    pub fn new(
        base: Arc<TropicalPolarizationData>,
        factor: AutomorphyFactor,
        profile: ValuationProfile,
    ) -> Result<Self, ThetaError> {
        let g = base.g();
        if factor.lambda.rows() != g || factor.lambda.cols() != g {
            return Err(ThetaError::InvalidFactor(format!(
                "Lambda is {}x{}, expected {g}x{g}",
                factor.lambda.rows(),
                factor.lambda.cols()
            )));
        }
        if factor.ell.len() != g {
            return Err(ThetaError::DimensionMismatch { expected: g, found: factor.ell.len() });
        }
        for e in &profile.entries {
            if e.rep.len() != g {
                return Err(ThetaError::DimensionMismatch { expected: g, found: e.rep.len() });
            }
        }
        if profile.finite().next().is_none() {
            return Err(ThetaError::EmptyProfile);
        }
        let beta = base.pairing().mul_int(&factor.lambda);
        let engine = if factor.lambda.is_zero() {
            if !factor.is_zero() {
                return Err(ThetaError::NontrivialRationalFactor);
            }
            let mut seen: Vec<&LatticeVector> = Vec::new();
            for (rep, _) in profile.finite() {
                if seen.contains(&rep) {
                    return Err(ThetaError::CongruentRepresentatives(rep.clone(), rep.clone()));
                }
                seen.push(rep);
            }
            Engine::Finite
        } else {
            let form = GramForm::new(beta.clone())
                .map_err(|e| ThetaError::InvalidFactor(format!("P*Lambda: {e}")))?;
            let cosets = CosetSystem::new(&factor.lambda)?;
            if cosets.index() != profile.entries.len() as u64 {
                return Err(ThetaError::IncompleteProfile { expected: cosets.index(), found: profile.entries.len() });
            }
            let canonical: Vec<_> = profile.entries.iter().map(|e| cosets.reduce(&e.rep)).collect();
            for i in 0..canonical.len() {
                for j in 0..i {
                    if canonical[i].0 == canonical[j].0 {
                        return Err(ThetaError::CongruentRepresentatives(
                            profile.entries[j].rep.clone(),
                            profile.entries[i].rep.clone(),
                        ));
                    }
                }
            }
            Engine::Ample(Arc::new(AmpleEngine { minimizer: QuadraticMinimizer::new(&form), cosets, canonical }))
        };
        let rep_pairings = profile.entries.iter().map(|e| base.pairing().mul_int_vec(&e.rep)).collect();
        let lambda_t = factor.lambda.transpose().to_rational();
        Ok(TropicalThetaFunction { base, factor, profile, beta, rep_pairings, lambda_t, engine })
    }

    pub fn base(&self) -> &Arc<TropicalPolarizationData> {
        &self.base
    }

    pub fn factor(&self) -> &AutomorphyFactor {
        &self.factor
    }

    pub fn profile(&self) -> &ValuationProfile {
        &self.profile
    }

    pub fn g(&self) -> usize {
        self.base.g()
    }

    /// Ample case: `PΛ` positive-definite.
    pub fn is_ample(&self) -> bool {
        matches!(self.engine, Engine::Ample(_))
    }

    pub fn cosets(&self) -> Option<&CosetSystem> {
        match &self.engine {
            Engine::Ample(e) => Some(&e.cosets),
            Engine::Finite => None,
        }
    }

    pub fn minimizer(&self) -> Option<&QuadraticMinimizer> {
        match &self.engine {
            Engine::Ample(e) => Some(&e.minimizer),
            Engine::Finite => None,
        }
    }

    pub fn c_trop(&self, n: &[i64]) -> Rational {
        half() * crate::matrix::bilinear_int(&self.beta, n, n) + dot_int(n, &self.factor.ell)
    }

    /// `w(u)` for any `u ∈ M`, extended from the representatives.
    pub fn profile_value(&self, u: &[i64]) -> ExtRational {
        match &self.engine {
            Engine::Finite => self
                .profile
                .entries
                .iter()
                .find(|e| e.rep.as_slice() == u)
                .map(|e| e.w.clone())
                .unwrap_or(ExtRational::Infinity),
            Engine::Ample(eng) => {
                let (canon, n) = eng.cosets.reduce(u);
                let k = eng.canonical.iter().position(|(c, _)| *c == canon).expect("complete profile");
                let m = &eng.canonical[k].1;
                // u = rep_k + Λ(n − m)
                let d: Vec<i64> = n.iter().zip(m).map(|(a, b)| a - b).collect();
                let entry = &self.profile.entries[k];
                entry.w.shifted(&(self.c_trop(&d) + dot_int(&d, &self.rep_pairings[k])))
            }
        }
    }

    /// The affine term `w(u) + ⟨u, v⟩`, `+∞` if `w(u)` is.
    pub fn term_value(&self, u: &[i64], v: &TropPoint) -> ExtRational {
        self.profile_value(u).shifted(&v.pair(u))
    }

    fn check_point(&self, v: &TropPoint) -> Result<(), ThetaError> {
        if v.dim() == self.g() {
            Ok(())
        } else {
            Err(ThetaError::DimensionMismatch { expected: self.g(), found: v.dim() })
        }
    }

    /// `f(v) = min_u { w(u) + ⟨u, v⟩ }` with all attaining `u`.
    pub fn evaluate(&self, v: &TropPoint) -> Result<ThetaValue, ThetaError> {
        self.check_point(v)?;
        let mut best: Option<Rational> = None;
        let mut witnesses: Vec<LatticeVector> = Vec::new();
        let mut offer = |value: Rational, us: Vec<LatticeVector>| match &best {
            Some(b) if value > *b => {}
            Some(b) if value == *b => witnesses.extend(us),
            _ => {
                best = Some(value);
                witnesses = us;
            }
        };
        match &self.engine {
            Engine::Finite => {
                for (rep, w) in self.profile.finite() {
                    offer(w + v.pair(rep), vec![rep.clone()]);
                }
            }
            Engine::Ample(eng) => {
                let lam_v = self.lambda_t.mul_vec(&v.coords);
                for (k, entry) in self.profile.entries.iter().enumerate() {
                    let Some(w) = entry.w.finite() else { continue };
                    let linear: Vec<Rational> = (0..self.g())
                        .map(|i| &self.factor.ell[i] + &self.rep_pairings[k][i] + &lam_v[i])
                        .collect();
                    let constant = w + v.pair(&entry.rep);
                    let m = eng.minimizer.minimize(&linear, &constant)?;
                    let us = m
                        .argmin
                        .iter()
                        .map(|n| {
                            let ln = self.factor.lambda.mul_vec(n);
                            entry.rep.iter().zip(ln).map(|(a, b)| a + b).collect()
                        })
                        .collect();
                    offer(m.value, us);
                }
            }
        }
        witnesses.sort();
        witnesses.dedup();
        Ok(ThetaValue { value: best.expect("profile has a finite entry"), witnesses })
    }

    pub fn value(&self, v: &TropPoint) -> Result<Rational, ThetaError> {
        self.evaluate(v).map(|t| t.value)
    }

    /// `v ↦ θ(v + v0)`: profile gains `⟨u, v0⟩`, `ℓ` gains `Λᵀ v0`.
    pub fn translate(&self, v0: &TropPoint) -> Result<TropicalThetaFunction, ThetaError> {
        self.check_point(v0)?;
        let profile = ValuationProfile::new(
            self.profile
                .entries
                .iter()
                .map(|e| ProfileEntry { rep: e.rep.clone(), w: e.w.shifted(&v0.pair(&e.rep)) })
                .collect(),
        );
        TropicalThetaFunction::new(self.base.clone(), self.factor.translated(v0), profile)
    }

    /// Checks `f(v) = f(v + u′) + c_trop(u′) + ⟨λ(u′), v⟩` exactly at each sample.
    pub fn verify_transformation(&self, samples: &[(TropPoint, LatticeVector)]) -> Result<TransformationReport, ThetaError> {
        let mut failures = Vec::new();
        for (v, n) in samples {
            let lhs = self.value(v)?;
            let moved = v.add(&self.base.embed_mprime(n));
            let rhs = self.value(&moved)? + self.c_trop(n) + v.pair(&self.factor.lambda.mul_vec(n));
            if lhs != rhs {
                failures.push(TransformationFailure { point: v.clone(), shift: n.clone(), lhs, rhs });
            }
        }
        Ok(TransformationReport { checked: samples.len(), failures })
    }

    /// `w(u) = w(−u)` on every representative and `ℓ = 0`.
    pub fn is_even(&self) -> bool {
        self.factor.ell.iter().all(Zero::is_zero)
            && self.profile.entries.iter().all(|e| {
                let neg: Vec<i64> = e.rep.iter().map(|x| -x).collect();
                self.profile_value(&neg) == e.w
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformationFailure {
    pub point: TropPoint,
    pub shift: LatticeVector,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformationReport {
    pub checked: usize,
    pub failures: Vec<TransformationFailure>,
}

impl TransformationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `φ(v) = min_{u′} { ½[u′, λ(u′)] + ⟨λ(u′), v⟩ }` for principal `λ`.
pub fn riemann_theta(data: &Arc<TropicalPolarizationData>) -> Result<TropicalThetaFunction, ThetaError> {
    if !data.is_principal() {
        return Err(ThetaError::NotPrincipal);
    }
    let g = data.g();
    TropicalThetaFunction::new(
        data.clone(),
        AutomorphyFactor::new(data.lambda().clone(), vec![Rational::zero(); g]),
        ValuationProfile::origin(g),
    )
}

/// Free-function form of [`TropicalThetaFunction::evaluate`].
pub fn evaluate(theta: &TropicalThetaFunction, v: &TropPoint) -> Result<ThetaValue, ThetaError> {
    theta.evaluate(v)
}

/// Free-function form of [`TropicalThetaFunction::translate`].
pub fn translate(theta: &TropicalThetaFunction, v0: &TropPoint) -> Result<TropicalThetaFunction, ThetaError> {
    theta.translate(v0)
}

/// Free-function form of [`TropicalThetaFunction::verify_transformation`].
pub fn verify_transformation(
    theta: &TropicalThetaFunction,
    samples: &[(TropPoint, LatticeVector)],
) -> Result<TransformationReport, ThetaError> {
    theta.verify_transformation(samples)
}

#[cfg(test)]
mod tests;
