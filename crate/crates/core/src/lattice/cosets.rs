use super::{LatticeError, LatticeVector};
use crate::matrix::IntMatrix;

/// Coset bookkeeping for `ℤ^g / Λℤ^g` with `Λ` nonsingular.
///
/// Column operations bring `Λ` to a lower-triangular Hermite form
/// `H = Λ·V` with positive diagonal and `0 ≤ H[i][j] < H[i][i]` left of the
/// diagonal. The box `∏ [0, H[i][i])` is then a complete, irredundant set of
/// representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSystem {
    lambda: IntMatrix,
    hermite: IntMatrix,
    transform: IntMatrix,
}

impl CosetSystem {
    pub fn new(lambda: &IntMatrix) -> Result<Self, LatticeError> {
        if !lambda.is_square() {
            return Err(crate::matrix::ShapeError::NotSquare {
                expected: lambda.rows(),
                rows: lambda.rows(),
                cols: lambda.cols(),
            }
            .into());
        }
        let g = lambda.rows();
        let mut h = lambda.clone();
        let mut v = IntMatrix::identity(g);
        for i in 0..g {
            for j in i + 1..g {
                while h[(i, j)] != 0 {
                    if h[(i, i)] != 0 {
                        let q = h[(i, j)] / h[(i, i)];
                        h.add_col_multiple(j, i, -q);
                        v.add_col_multiple(j, i, -q);
                    }
                    h.swap_cols(i, j);
                    v.swap_cols(i, j);
                }
            }
            if h[(i, i)] == 0 {
                return Err(LatticeError::Singular);
            }
            if h[(i, i)] < 0 {
                h.negate_col(i);
                v.negate_col(i);
            }
            for j in 0..i {
                let q = h[(i, j)].div_euclid(h[(i, i)]);
                if q != 0 {
                    h.add_col_multiple(j, i, -q);
                    v.add_col_multiple(j, i, -q);
                }
            }
        }
        debug_assert_eq!(lambda.mul(&v), h);
        Ok(CosetSystem { lambda: lambda.clone(), hermite: h, transform: v })
    }

    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    pub fn rank(&self) -> usize {
        self.lambda.rows()
    }

    /// `[ℤ^g : Λℤ^g] = |det Λ|`
    pub fn index(&self) -> u64 {
        (0..self.rank()).map(|i| self.hermite[(i, i)] as u64).product()
    }

    /// Canonical representatives in lexicographic order.
    pub fn representatives(&self) -> Vec<LatticeVector> {
        let g = self.rank();
        let mut out = vec![vec![0i64; g]];
        for i in 0..g {
            let bound = self.hermite[(i, i)];
            out = out
                .into_iter()
                .flat_map(|r| {
                    (0..bound).map(move |x| {
                        let mut r = r.clone();
                        r[i] = x;
                        r
                    })
                })
                .collect();
        }
        out.sort();
        out
    }

    /// Splits `u = rep + Λ·n` with `rep` canonical.
    pub fn reduce(&self, u: &[i64]) -> (LatticeVector, LatticeVector) {
        let g = self.rank();
        assert_eq!(u.len(), g, "lattice vector has wrong length");
        let mut r = u.to_vec();
        let mut k = vec![0i64; g];
        for i in 0..g {
            let d = self.hermite[(i, i)];
            k[i] = r[i].div_euclid(d);
            if k[i] != 0 {
                for (row, x) in r.iter_mut().enumerate().skip(i) {
                    *x -= k[i] * self.hermite[(row, i)];
                }
            }
        }
        (r, self.transform.mul_vec(&k))
    }

    pub fn congruent(&self, a: &[i64], b: &[i64]) -> bool {
        self.reduce(a).0 == self.reduce(b).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_matches_determinant() {
        for rows in [
            vec![vec![2]],
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![2, 1], vec![1, 3]],
            vec![vec![4, -6], vec![2, 1]],
            vec![vec![0, 3, 1], vec![2, 0, 0], vec![1, 1, 5]],
        ] {
            let lam = IntMatrix::from_rows(rows).unwrap();
            let cs = CosetSystem::new(&lam).unwrap();
            assert_eq!(cs.index() as i64, lam.determinant().abs());
            assert_eq!(cs.representatives().len() as u64, cs.index());
        }
    }

    #[test]
    fn reduce_reconstructs() {
        let lam = IntMatrix::from_ints(&[&[4, -6], &[2, 1]]);
        let cs = CosetSystem::new(&lam).unwrap();
        let reps = cs.representatives();
        for a in -7..=7 {
            for b in -7..=7 {
                let (rep, n) = cs.reduce(&[a, b]);
                assert!(reps.contains(&rep));
                let back: Vec<i64> = rep.iter().zip(lam.mul_vec(&n)).map(|(x, y)| x + y).collect();
                assert_eq!(back, vec![a, b]);
            }
        }
    }

    #[test]
    fn singular_rejected() {
        let lam = IntMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(CosetSystem::new(&lam), Err(LatticeError::Singular));
    }
}
