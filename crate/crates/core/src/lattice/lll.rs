use num_traits::Signed;

use super::{GramForm, LatticeError};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::rational::{half, rat, round_i64, Rational};

/// Lovász parameter, compared exactly.
pub const LLL_DELTA: (i64, i64) = (3, 4);

fn delta() -> Rational {
    rat(LLL_DELTA.0, LLL_DELTA.1)
}

/// Result of reducing a Gram matrix: `reduced = Uᵀ·B·U` with `U` unimodular.
#[derive(Clone, Debug)]
pub struct LllReduction {
    pub transform: IntMatrix,
    pub reduced: GramForm,
}

struct GramSchmidt {
    mu: RatMatrix,
    norms: Vec<Rational>,
}

fn gram_schmidt(g: &RatMatrix) -> GramSchmidt {
    let n = g.rows();
    let mut mu = RatMatrix::identity(n);
    let mut norms: Vec<Rational> = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..i {
            let mut s = g[(i, j)].clone();
            for k in 0..j {
                s -= &mu[(j, k)] * &mu[(i, k)] * &norms[k];
            }
            mu[(i, j)] = s / &norms[j];
        }
        let mut b = g[(i, i)].clone();
        for k in 0..i {
            b -= &mu[(i, k)] * &mu[(i, k)] * &norms[k];
        }
        norms.push(b);
    }
    GramSchmidt { mu, norms }
}

/// Applies the column operation `b_k ← b_k + f·b_j` to the Gram matrix.
fn gram_add_multiple(g: &mut RatMatrix, k: usize, j: usize, f: i64) {
    let mut e = IntMatrix::identity(g.rows());
    e[(j, k)] = f;
    let e = e.to_rational();
    *g = e.transpose().mul(g).mul(&e);
}

fn gram_swap(g: &mut RatMatrix, a: usize, b: usize) {
    let n = g.rows();
    let mut p = RatMatrix::zeros(n, n);
    for i in 0..n {
        let src = if i == a { b } else if i == b { a } else { i };
        for j in 0..n {
            let sj = if j == a { b } else if j == b { a } else { j };
            p[(i, j)] = g[(src, sj)].clone();
        }
    }
    *g = p;
}

/// LLL-reduces the basis whose Gram matrix is `form`, with δ = 3/4.
pub fn lll_reduce(form: &GramForm) -> LllReduction {
    let n = form.rank();
    let mut g = form.matrix().clone();
    let mut u = IntMatrix::identity(n);
    let d = delta();
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let gs = gram_schmidt(&g);
            let m = &gs.mu[(k, j)];
            if m.abs() > half() {
                let r = round_i64(m);
                gram_add_multiple(&mut g, k, j, -r);
                u.add_col_multiple(k, j, -r);
            }
        }
        let gs = gram_schmidt(&g);
        let m = &gs.mu[(k, k - 1)];
        if gs.norms[k] >= (&d - m * m) * &gs.norms[k - 1] {
            k += 1;
        } else {
            gram_swap(&mut g, k, k - 1);
            u.swap_cols(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    debug_assert_eq!(
        u.to_rational().transpose().mul(form.matrix()).mul(&u.to_rational()),
        g
    );
    let reduced = GramForm::new(g).expect("congruent form stays positive-definite");
    LllReduction { transform: u, reduced }
}

/// Checks size reduction (`|μ_kj| ≤ ½`) and the Lovász condition exactly.
pub fn is_lll_reduced(form: &GramForm) -> bool {
    let gs = gram_schmidt(form.matrix());
    let n = form.rank();
    let d = delta();
    for k in 1..n {
        for j in 0..k {
            if gs.mu[(k, j)].abs() > half() {
                return false;
            }
        }
        let m = &gs.mu[(k, k - 1)];
        if gs.norms[k] < (&d - m * m) * &gs.norms[k - 1] {
            return false;
        }
    }
    true
}

impl GramForm {
    /// `Uᵀ·B·U` for an integer matrix `U` (not checked for unimodularity).
    pub fn congruent(&self, u: &IntMatrix) -> Result<GramForm, LatticeError> {
        let ur = u.to_rational();
        GramForm::new(ur.transpose().mul(self.matrix()).mul(&ur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_is_reduced() {
        let b = GramForm::from_ints(&[&[2]]).unwrap();
        let r = lll_reduce(&b);
        assert_eq!(r.transform, IntMatrix::identity(1));
        assert_eq!(r.reduced, b);
    }

    #[test]
    fn already_reduced_form_unchanged() {
        let b = GramForm::from_ints(&[&[2, 1], &[1, 2]]).unwrap();
        assert!(is_lll_reduced(&b));
        let r = lll_reduce(&b);
        assert_eq!(r.transform, IntMatrix::identity(2));
        assert_eq!(r.reduced, b);
    }

    #[test]
    fn reduces_skewed_form() {
        let b = GramForm::from_ints(&[&[5, 4], &[4, 5]]).unwrap();
        let r = lll_reduce(&b);
        assert_eq!(r.transform.determinant().abs(), 1);
        assert!(r.reduced.matrix()[(0, 0)] <= crate::rational::int(5));
        assert!(is_lll_reduced(&r.reduced));
        assert_eq!(b.congruent(&r.transform).unwrap(), r.reduced);
    }

    #[test]
    fn reduces_long_basis() {
        let b = GramForm::from_ints(&[&[1, 7, 3], &[7, 50, 20], &[3, 20, 11]]).unwrap();
        let r = lll_reduce(&b);
        assert_eq!(r.transform.determinant().abs(), 1);
        assert!(is_lll_reduced(&r.reduced));
        assert_eq!(b.congruent(&r.transform).unwrap(), r.reduced);
    }
}
