use num_traits::{One, Signed, Zero};

use super::LatticeError;
use crate::matrix::RatMatrix;
use crate::rational::Rational;

/// `B = L·D·Lᵀ` with `L` unit lower-triangular and `D` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ldlt {
    pub lower: RatMatrix,
    pub diag: Vec<Rational>,
}

impl Ldlt {
    pub fn recompose(&self) -> RatMatrix {
        let ld = self.lower.mul(&RatMatrix::diagonal(&self.diag));
        ld.mul(&self.lower.transpose())
    }

    /// Solves `B x = rhs` by forward and back substitution.
    pub fn solve(&self, rhs: &[Rational]) -> Vec<Rational> {
        let n = self.diag.len();
        let l = &self.lower;
        let mut y = rhs.to_vec();
        for i in 0..n {
            for j in 0..i {
                let t = &l[(i, j)] * &y[j];
                y[i] -= t;
            }
        }
        for i in 0..n {
            y[i] /= &self.diag[i];
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = &l[(j, i)] * &y[j];
                y[i] -= t;
            }
        }
        y
    }
}

/// Exact LDLᵀ of a symmetric matrix; fails at the first nonpositive pivot,
/// so success certifies positive-definiteness.
pub fn ldlt_decompose(b: &RatMatrix) -> Result<Ldlt, LatticeError> {
    if !b.is_symmetric() {
        return Err(LatticeError::NotSymmetric);
    }
    let n = b.rows();
    let mut lower = RatMatrix::identity(n);
    let mut diag: Vec<Rational> = Vec::with_capacity(n);
    for j in 0..n {
        let mut d = b[(j, j)].clone();
        for k in 0..j {
            d -= &lower[(j, k)] * &lower[(j, k)] * &diag[k];
        }
        if !d.is_positive() {
            return Err(LatticeError::NotPositiveDefinite { pivot: j + 1 });
        }
        for i in j + 1..n {
            let mut s = b[(i, j)].clone();
            for k in 0..j {
                s -= &lower[(i, k)] * &lower[(j, k)] * &diag[k];
            }
            lower[(i, j)] = s / &d;
        }
        diag.push(d);
    }
    debug_assert!((0..n).all(|i| lower[(i, i)].is_one() && (i + 1..n).all(|j| lower[(i, j)].is_zero())));
    Ok(Ldlt { lower, diag })
}
