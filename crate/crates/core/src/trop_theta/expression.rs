use std::sync::Arc;

use num_traits::Zero;

use super::{AutomorphyFactor, ThetaError, TropicalThetaFunction};
use crate::rational::Rational;
use crate::trop_av::TropPoint;

/// `multiplicity · θ(v + shift)`
#[derive(Clone, Debug)]
pub struct ExpressionTerm {
    pub multiplicity: i64,
    pub shift: TropPoint,
    pub theta: Arc<TropicalThetaFunction>,
}

/// Formal integer combination of translated theta functions, evaluated
/// pointwise. Products of sections become sums here; no convolution of
/// profiles is attempted since cancellation could break it.
#[derive(Clone, Debug)]
pub struct TropicalThetaExpression {
    terms: Vec<ExpressionTerm>,
}

impl TropicalThetaExpression {
    pub fn new(terms: Vec<ExpressionTerm>) -> Result<Self, ThetaError> {
        let first = terms.first().ok_or(ThetaError::EmptyExpression)?;
        let g = first.theta.g();
        for t in &terms {
            if t.theta.g() != g {
                return Err(ThetaError::DimensionMismatch { expected: g, found: t.theta.g() });
            }
            if t.shift.dim() != g {
                return Err(ThetaError::DimensionMismatch { expected: g, found: t.shift.dim() });
            }
        }
        Ok(TropicalThetaExpression { terms })
    }

    pub fn terms(&self) -> &[ExpressionTerm] {
        &self.terms
    }

    pub fn g(&self) -> usize {
        self.terms[0].theta.g()
    }

    /// Terms must live on one torus; compared through the pairing matrix.
    fn check_compatible(&self) -> Result<(), ThetaError> {
        let p = self.terms[0].theta.base().pairing();
        if self.terms.iter().all(|t| t.theta.base().pairing() == p) {
            Ok(())
        } else {
            Err(ThetaError::Incompatible)
        }
    }

    pub fn evaluate(&self, v: &TropPoint) -> Result<Rational, ThetaError> {
        let mut total = Rational::zero();
        for t in &self.terms {
            let value = t.theta.value(&v.add(&t.shift))?;
            total += value * Rational::from_integer(t.multiplicity.into());
        }
        Ok(total)
    }

    pub fn automorphy(&self) -> Result<AutomorphyFactor, ThetaError> {
        self.check_compatible()?;
        let mut acc = AutomorphyFactor::trivial(self.g());
        for t in &self.terms {
            acc = acc.plus(&t.theta.factor().translated(&t.shift).scaled(t.multiplicity));
        }
        Ok(acc)
    }
}

/// `Σ mult·(Λ, ℓ + Λᵀ·shift)` over the terms.
pub fn expression_automorphy(expr: &TropicalThetaExpression) -> Result<AutomorphyFactor, ThetaError> {
    expr.automorphy()
}

/// An expression whose automorphy factors cancel, hence a function on `Σ`.
#[derive(Clone, Debug)]
pub struct PeriodicPLFunction {
    expr: TropicalThetaExpression,
}

impl PeriodicPLFunction {
    pub fn expr(&self) -> &TropicalThetaExpression {
        &self.expr
    }

    pub fn g(&self) -> usize {
        self.expr.g()
    }

    pub fn evaluate(&self, v: &TropPoint) -> Result<Rational, ThetaError> {
        self.expr.evaluate(v)
    }

    /// Every `u` attaining the min in some term, keyed by term index.
    pub fn witnesses(&self, v: &TropPoint) -> Result<Vec<Vec<Vec<i64>>>, ThetaError> {
        self.expr
            .terms
            .iter()
            .map(|t| t.theta.evaluate(&v.add(&t.shift)).map(|tv| tv.witnesses))
            .collect()
    }

    /// Periods `M′` embedded in `N_ℝ`, taken from the first term.
    pub fn embed_period(&self, n: &[i64]) -> TropPoint {
        self.expr.terms[0].theta.base().embed_mprime(n)
    }
}

pub fn difference_to_periodic(expr: TropicalThetaExpression) -> Result<PeriodicPLFunction, ThetaError> {
    let residual = expr.automorphy()?;
    if !residual.is_zero() {
        return Err(ThetaError::NonzeroAutomorphy {
            lambda: residual.lambda.to_rows(),
            ell: residual.describe_ell(),
        });
    }
    Ok(PeriodicPLFunction { expr })
}

/// `h(v) = Σ θ(v + v_i) − n·θ(v)` for shifts summing to zero.
pub fn level_n_function(
    theta: &Arc<TropicalThetaFunction>,
    shifts: &[TropPoint],
) -> Result<PeriodicPLFunction, ThetaError> {
    if !theta.base().is_principal() {
        return Err(ThetaError::NotPrincipal);
    }
    let g = theta.g();
    let mut sum = TropPoint::origin(g);
    for s in shifts {
        if s.dim() != g {
            return Err(ThetaError::DimensionMismatch { expected: g, found: s.dim() });
        }
        sum = sum.add(s);
    }
    if !sum.coords.iter().all(Zero::is_zero) {
        return Err(ThetaError::ShiftsDoNotSumToZero);
    }
    let mut terms: Vec<ExpressionTerm> = shifts
        .iter()
        .map(|s| ExpressionTerm { multiplicity: 1, shift: s.clone(), theta: theta.clone() })
        .collect();
    terms.push(ExpressionTerm { multiplicity: -(shifts.len() as i64), shift: TropPoint::origin(g), theta: theta.clone() });
    difference_to_periodic(TropicalThetaExpression::new(terms)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerFailure {
    pub point: TropPoint,
    pub value: Rational,
    pub reflected: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerReport {
    pub checked: usize,
    pub failures: Vec<KummerFailure>,
    /// Terms whose theta is not even (`ℓ ≠ 0` or `w(u) ≠ w(−u)`).
    pub precondition_failures: Vec<String>,
}

impl KummerReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.precondition_failures.is_empty()
    }
}

/// Checks `h(v) = h(−v)` at every sample and at the reduced representatives
/// of `v` and `−v`.
pub fn kummer_check(h: &PeriodicPLFunction, samples: &[TropPoint]) -> Result<KummerReport, ThetaError> {
    let precondition_failures = h
        .expr
        .terms
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.theta.is_even())
        .map(|(i, _)| format!("term {i}: theta is not even"))
        .collect();
    let base = h.expr.terms[0].theta.base().clone();
    let mut failures = Vec::new();
    let mut checked = 0;
    for v in samples {
        let plus = base.reduce_mod_lattice(v)?.rep;
        let minus = base.reduce_mod_lattice(&v.neg())?.rep;
        for (a, b) in [(v.clone(), v.neg()), (plus, minus)] {
            let value = h.evaluate(&a)?;
            let reflected = h.evaluate(&b)?;
            checked += 1;
            if value != reflected {
                failures.push(KummerFailure { point: a, value, reflected });
            }
        }
    }
    Ok(KummerReport { checked, failures, precondition_failures })
}
