//! Tropical abelian varieties `Σ = N_ℝ / M′`.
//!
//! Coordinates: `M` and `M′` carry fixed bases `e_j`, `e′_i`; a point
//! `v ∈ N_ℝ = Hom(M, ℝ)` is stored through its values `⟨e_j, v⟩`. The pairing
//! matrix is `P[i][j] = [e′_i, e_j]` and column `j` of `Λ` holds the
//! coordinates of `λ(e′_j)` in `M`, so the polarization form is `β = P·Λ`.
//! A zero `Λ` means that no polarization is claimed.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{ldlt_decompose, GramForm, LatticeError, LatticeVector};
use crate::matrix::{IntMatrix, RatMatrix, ShapeError};
use crate::rational::{dot_int, floor_i64, fmt_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropAvError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid tropical abelian variety data: {}", .0.problems.join("; "))]
    InvalidData(Box<ValidityReport>),
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl From<ShapeError> for TropAvError {
    fn from(e: ShapeError) -> Self {
        TropAvError::ShapeMismatch(e.to_string())
    }
}

/// A point of `N_ℝ`, coordinate `j` being `⟨e_j, v⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropPoint {
    pub coords: Vec<Rational>,
}

impl TropPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        TropPoint { coords }
    }

    pub fn origin(g: usize) -> Self {
        TropPoint { coords: vec![Rational::zero(); g] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &TropPoint) -> TropPoint {
        TropPoint::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &TropPoint) -> TropPoint {
        TropPoint::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> TropPoint {
        TropPoint::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: &Rational) -> TropPoint {
        TropPoint::new(self.coords.iter().map(|a| a * s).collect())
    }

    /// `⟨u, v⟩` for `u ∈ M`.
    pub fn pair(&self, u: &[i64]) -> Rational {
        dot_int(u, &self.coords)
    }
}

impl From<Vec<Rational>> for TropPoint {
    fn from(coords: Vec<Rational>) -> Self {
        TropPoint { coords }
    }
}

/// A class in `Σ = N_ℝ/M′`: `rep` lies in the half-open fundamental
/// parallelepiped and `original = rep + embed(shift)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaPoint {
    pub rep: TropPoint,
    pub shift: LatticeVector,
}

/// Exact outcome of the validity checks on `(P, Λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub g: usize,
    pub pairing_nondegenerate: bool,
    #[serde(serialize_with = "ser_rational")]
    pub pairing_determinant: Rational,
    pub polarized: bool,
    pub form_symmetric: bool,
    pub form_positive_definite: bool,
    /// 1-based index of the first nonpositive LDLᵀ pivot, if any.
    pub failing_pivot: Option<usize>,
    pub lambda_determinant: i64,
    /// `[M : λ(M′)] = |det Λ|`
    pub index: u64,
    pub principal: bool,
    pub valid: bool,
    pub problems: Vec<String>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// Runs every check on a candidate `(P, Λ)`; only a shape problem is an
/// error, mathematical failures are recorded in the report.
pub fn validate(pairing: &RatMatrix, lambda: &IntMatrix) -> Result<ValidityReport, TropAvError> {
    let g = pairing.rows();
    if !pairing.is_square() {
        return Err(TropAvError::ShapeMismatch(format!("P is {}x{}", pairing.rows(), pairing.cols())));
    }
    if lambda.rows() != g || lambda.cols() != g {
        return Err(TropAvError::ShapeMismatch(format!(
            "Lambda is {}x{}, expected {g}x{g}",
            lambda.rows(),
            lambda.cols()
        )));
    }
    let mut problems = Vec::new();
    let det_p = pairing.determinant();
    let nondegenerate = !det_p.is_zero();
    if !nondegenerate {
        problems.push("pairing degenerate".to_string());
    }
    let polarized = !lambda.is_zero();
    let beta = pairing.mul_int(lambda);
    let symmetric = beta.is_symmetric();
    let (positive, pivot) = if !polarized {
        (false, None)
    } else if !symmetric {
        problems.push("polarization form P*Lambda is not symmetric".to_string());
        (false, None)
    } else {
        match ldlt_decompose(&beta) {
            Ok(_) => (true, None),
            Err(LatticeError::NotPositiveDefinite { pivot }) => {
                problems.push(format!("polarization form P*Lambda is not positive-definite (pivot {pivot})"));
                (false, Some(pivot))
            }
            Err(e) => {
                problems.push(e.to_string());
                (false, None)
            }
        }
    };
    let det_l = lambda.determinant();
    let index = det_l.unsigned_abs();
    Ok(ValidityReport {
        g,
        pairing_nondegenerate: nondegenerate,
        pairing_determinant: det_p,
        polarized,
        form_symmetric: symmetric,
        form_positive_definite: positive,
        failing_pivot: pivot,
        lambda_determinant: det_l,
        index,
        principal: polarized && index == 1,
        valid: problems.is_empty(),
        problems,
    })
}

/// Validated data `(M, M′, [·,·], λ)` of a (possibly unpolarized) tropical
/// abelian variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPolarizationData {
    pairing: RatMatrix,
    lambda: IntMatrix,
    beta: Option<GramForm>,
    /// `(Pᵀ)⁻¹`, converting points to fundamental-domain coefficients.
    embed_inverse: RatMatrix,
    report: ValidityReport,
}

impl TropicalPolarizationData {
    pub fn new(pairing: RatMatrix, lambda: IntMatrix) -> Result<Self, TropAvError> {
        let report = validate(&pairing, &lambda)?;
        if !report.valid {
            return Err(TropAvError::InvalidData(Box::new(report)));
        }
        let beta = if report.polarized {
            Some(GramForm::new(pairing.mul_int(&lambda)).expect("validated form"))
        } else {
            None
        };
        let embed_inverse = pairing.transpose().inverse().expect("nondegenerate pairing");
        Ok(TropicalPolarizationData { pairing, lambda, beta, embed_inverse, report })
    }

    /// Unpolarized torus `N_ℝ / M′` (`Λ = 0`).
    pub fn unpolarized(pairing: RatMatrix) -> Result<Self, TropAvError> {
        let g = pairing.rows();
        Self::new(pairing, IntMatrix::zeros(g, g))
    }

    pub fn g(&self) -> usize {
        self.pairing.rows()
    }

    pub fn pairing(&self) -> &RatMatrix {
        &self.pairing
    }

    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    /// `β = P·Λ`, present when a polarization is claimed.
    pub fn beta(&self) -> Option<&GramForm> {
        self.beta.as_ref()
    }

    pub fn report(&self) -> &ValidityReport {
        &self.report
    }

    pub fn is_principal(&self) -> bool {
        self.report.principal
    }

    fn check_point(&self, v: &TropPoint) -> Result<(), TropAvError> {
        if v.dim() == self.g() {
            Ok(())
        } else {
            Err(TropAvError::DimensionMismatch { expected: self.g(), found: v.dim() })
        }
    }

    /// `[u′, u] = n′ᵀ P n`
    pub fn pair(&self, mprime: &[i64], m: &[i64]) -> Rational {
        crate::matrix::bilinear_int(&self.pairing, mprime, m)
    }

    /// The image of `u′ ∈ M′` in `N_ℝ`: coordinates `Pᵀ n`.
    pub fn embed_mprime(&self, n: &[i64]) -> TropPoint {
        assert_eq!(n.len(), self.g(), "lattice vector has wrong length");
        TropPoint::new(self.pairing.transpose().mul_int_vec(n))
    }

    /// Coefficients of `v` on the embedded basis of `M′`.
    pub fn fundamental_coefficients(&self, v: &TropPoint) -> Vec<Rational> {
        self.embed_inverse.mul_vec(&v.coords)
    }

    /// Representative of `v` in the half-open parallelepiped on the embedded
    /// `M′` basis.
    pub fn reduce_mod_lattice(&self, v: &TropPoint) -> Result<SigmaPoint, TropAvError> {
        self.check_point(v)?;
        let shift: LatticeVector = self.fundamental_coefficients(v).iter().map(floor_i64).collect();
        let rep = v.sub(&self.embed_mprime(&shift));
        Ok(SigmaPoint { rep, shift })
    }

    /// `Σ′ = N′_ℝ / M`: pairing transposed, polarization `e·λ⁻¹` where `e`
    /// is the exponent of `M/λ(M′)` (so `λ⁻¹` in the principal case).
    pub fn dual(&self) -> Result<TropicalPolarizationData, TropAvError> {
        let pairing = self.pairing.transpose();
        if !self.report.polarized {
            return Self::unpolarized(pairing);
        }
        let inv = self.lambda.to_rational().inverse().expect("polarization is nonsingular");
        let exponent = (1..=self.report.index as i64)
            .find(|&e| inv.scale(&Rational::from_integer(BigInt::from(e))).to_integer().is_some())
            .expect("index times inverse is integral");
        let lambda = inv.scale(&Rational::from_integer(BigInt::from(exponent))).to_integer().expect("integral");
        Self::new(pairing, lambda)
    }

    /// Coordinates in `N′_ℝ` of the induced map: `⟨λ(e′_i), v⟩ = (Λᵀ v)_i`.
    pub fn polarization_map(&self, v: &TropPoint) -> Result<Vec<Rational>, TropAvError> {
        self.check_point(v)?;
        Ok(self.lambda.transpose().to_rational().mul_vec(&v.coords))
    }

    /// The image of `u ∈ M` in `N′_ℝ`: coordinates `([e′_i, u])_i = P u`.
    pub fn embed_m_dual(&self, u: &[i64]) -> Vec<Rational> {
        self.pairing.mul_int_vec(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn data(p: &[&[i64]], l: &[&[i64]]) -> TropicalPolarizationData {
        TropicalPolarizationData::new(RatMatrix::from_ints(p), IntMatrix::from_ints(l)).unwrap()
    }

    #[test]
    fn validate_examples() {
        let r = validate(&RatMatrix::from_ints(&[&[2]]), &IntMatrix::from_ints(&[&[1]])).unwrap();
        assert!(r.valid && r.principal);
        assert_eq!(r.index, 1);

        let r = validate(&RatMatrix::from_ints(&[&[2]]), &IntMatrix::from_ints(&[&[2]])).unwrap();
        assert!(r.valid && !r.principal);
        assert_eq!(r.index, 2);

        let r = validate(&RatMatrix::from_ints(&[&[0]]), &IntMatrix::from_ints(&[&[1]])).unwrap();
        assert!(!r.valid && !r.pairing_nondegenerate);
        assert!(r.problems.iter().any(|p| p.contains("pairing degenerate")));
    }

    #[test]
    fn validate_shape_and_definiteness() {
        assert!(matches!(
            validate(&RatMatrix::from_ints(&[&[2, 0], &[0, 2]]), &IntMatrix::from_ints(&[&[1]])),
            Err(TropAvError::ShapeMismatch(_))
        ));
        let r = validate(&RatMatrix::from_ints(&[&[1, 2], &[2, 1]]), &IntMatrix::identity(2)).unwrap();
        assert_eq!(r.failing_pivot, Some(2));
        assert!(!r.valid);
        let r = validate(&RatMatrix::from_ints(&[&[1, 2], &[0, 1]]), &IntMatrix::identity(2)).unwrap();
        assert!(!r.form_symmetric && !r.valid);
    }

    #[test]
    fn embedding_examples() {
        let d = data(&[&[2]], &[&[1]]);
        assert_eq!(d.embed_mprime(&[1]).coords, vec![int(2)]);
        assert_eq!(d.embed_mprime(&[0]).coords, vec![int(0)]);
        let d2 = data(&[&[2, 1], &[1, 2]], &[&[1, 0], &[0, 1]]);
        assert_eq!(d2.embed_mprime(&[1, 0]).coords, vec![int(2), int(1)]);
    }

    #[test]
    fn reduction_examples() {
        let d = data(&[&[2]], &[&[1]]);
        let s = d.reduce_mod_lattice(&TropPoint::new(vec![rat(-3, 2)])).unwrap();
        assert_eq!((s.rep.coords, s.shift), (vec![rat(1, 2)], vec![-1]));
        let s = d.reduce_mod_lattice(&TropPoint::new(vec![int(0)])).unwrap();
        assert_eq!((s.rep.coords, s.shift), (vec![int(0)], vec![0]));
        let s = d.reduce_mod_lattice(&TropPoint::new(vec![int(2)])).unwrap();
        assert_eq!((s.rep.coords, s.shift), (vec![int(0)], vec![1]));
        assert!(d.reduce_mod_lattice(&TropPoint::new(vec![int(0), int(1)])).is_err());
    }

    #[test]
    fn dual_examples() {
        let d = data(&[&[2]], &[&[1]]);
        assert_eq!(d.dual().unwrap(), d);
        let d = data(&[&[2, 0], &[0, 4]], &[&[1, 0], &[0, 1]]);
        let dd = d.dual().unwrap();
        assert_eq!(dd.pairing(), &RatMatrix::from_ints(&[&[2, 0], &[0, 4]]).transpose());
        assert_eq!(dd.dual().unwrap(), d);
        let skew = data(&[&[2, 1], &[0, 3]], &[&[3, -1], &[0, 2]]);
        assert!(skew.dual().is_ok());
        assert_eq!(skew.dual().unwrap().dual().unwrap(), skew);
    }

    #[test]
    fn polarization_map_examples() {
        let d = data(&[&[2]], &[&[1]]);
        assert_eq!(d.polarization_map(&TropPoint::new(vec![rat(1, 2)])).unwrap(), vec![rat(1, 2)]);
        let d2 = TropicalPolarizationData::new(RatMatrix::from_ints(&[&[2]]), IntMatrix::from_ints(&[&[2]])).unwrap();
        assert_eq!(d2.polarization_map(&TropPoint::new(vec![rat(1, 2)])).unwrap(), vec![int(1)]);
        let a = d.polarization_map(&TropPoint::new(vec![int(0)])).unwrap();
        let b = d.polarization_map(&TropPoint::new(vec![int(2)])).unwrap();
        assert_eq!(&b[0] - &a[0], d.embed_m_dual(&[1])[0]);
    }
}
