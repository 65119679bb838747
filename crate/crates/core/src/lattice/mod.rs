//! Exact lattice machinery: LDLᵀ factorisation, LLL reduction, Fincke–Pohst
//! enumeration and the integer convex-quadratic minimizer behind every
//! theta evaluation, plus coset bookkeeping for `ℤ^g / Λℤ^g`.

mod cosets;
mod enumerate;
mod ldlt;
mod lll;

pub use cosets::CosetSystem;
pub use enumerate::{enumerate_below, minimize_quadratic, QuadraticMinimizer, QuadraticMinimum};
pub use ldlt::{ldlt_decompose, Ldlt};
pub use lll::{is_lll_reduced, lll_reduce, LllReduction, LLL_DELTA};

use thiserror::Error;

use crate::matrix::{RatMatrix, ShapeError};
use crate::rational::Rational;

/// Integer coordinates of an element of `M` or `M′` in a fixed basis.
pub type LatticeVector = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    /// `pivot` is 1-based.
    #[error("matrix is not positive-definite (pivot {pivot} is not positive)")]
    NotPositiveDefinite { pivot: usize },
    #[error("radius must be nonnegative")]
    NegativeRadius,
    #[error("expected a vector of length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// A symmetric positive-definite Gram matrix, certified by an exact LDLᵀ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    matrix: RatMatrix,
    ldlt: Ldlt,
}

impl GramForm {
    pub fn new(matrix: RatMatrix) -> Result<Self, LatticeError> {
        if !matrix.is_square() {
            return Err(ShapeError::NotSquare {
                expected: matrix.rows(),
                rows: matrix.rows(),
                cols: matrix.cols(),
            }
            .into());
        }
        let ldlt = ldlt_decompose(&matrix)?;
        Ok(GramForm { matrix, ldlt })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        Self::new(RatMatrix::from_ints(rows))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn ldlt(&self) -> &Ldlt {
        &self.ldlt
    }

    /// `½ xᵀ B x`
    pub fn half_norm(&self, x: &[Rational]) -> Rational {
        crate::rational::dot(x, &self.matrix.mul_vec(x)) * crate::rational::half()
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<(), LatticeError> {
        if len == self.rank() {
            Ok(())
        } else {
            Err(LatticeError::DimensionMismatch { expected: self.rank(), found: len })
        }
    }
}
