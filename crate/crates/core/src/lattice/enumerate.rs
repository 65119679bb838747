use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{lll_reduce, GramForm, LatticeError, LatticeVector, Ldlt, LllReduction};
use crate::matrix::IntMatrix;
use crate::rational::{ceil_i64, dot, dot_int, floor_i64, half, int, round_i64, to_f64, Rational};

/// Integers `n` with `(n − a)² ≤ t`, as an inclusive range.
fn integer_window(a: &Rational, t: &Rational) -> Option<(i64, i64)> {
    if t.is_negative() {
        return None;
    }
    let fits = |n: i64| {
        let y = int(n) - a;
        &y * &y <= *t
    };
    let nearest = round_i64(a);
    if !fits(nearest) {
        return None;
    }
    let (af, rf) = (to_f64(a), to_f64(t).sqrt());
    let mut hi = ((af + rf).floor() as i64).max(nearest);
    while !fits(hi) {
        hi -= 1;
    }
    while fits(hi + 1) {
        hi += 1;
    }
    let mut lo = ((af - rf).ceil() as i64).min(nearest);
    while !fits(lo) {
        lo += 1;
    }
    while fits(lo - 1) {
        lo -= 1;
    }
    Some((lo, hi))
}

/// Fincke–Pohst: visits every integer `x` with `(x − c)ᵀ B (x − c) ≤ bound`,
/// where `B = L D Lᵀ`. Coordinates are fixed from the last to the first.
fn fincke_pohst(ldlt: &Ldlt, center: &[Rational], bound: &Rational, visit: &mut impl FnMut(&[i64])) {
    let n = center.len();
    if n == 0 {
        return;
    }
    let mut x = vec![0i64; n];
    descend(ldlt, center, n - 1, bound.clone(), &mut x, visit);
}

fn descend(
    ldlt: &Ldlt,
    center: &[Rational],
    level: usize,
    remaining: Rational,
    x: &mut Vec<i64>,
    visit: &mut impl FnMut(&[i64]),
) {
    let n = center.len();
    let mut shift = Rational::zero();
    for j in level + 1..n {
        shift += &ldlt.lower[(j, level)] * (int(x[j]) - &center[j]);
    }
    let a = &center[level] - &shift;
    let d = &ldlt.diag[level];
    let Some((lo, hi)) = integer_window(&a, &(&remaining / d)) else {
        return;
    };
    for v in lo..=hi {
        x[level] = v;
        let y = int(v) - &a;
        let rest = &remaining - d * &y * &y;
        if level == 0 {
            visit(x);
        } else {
            descend(ldlt, center, level - 1, rest, x, visit);
        }
    }
}

/// Exact minimum of `½ nᵀBn + ℓᵀn + c₀` over `n ∈ ℤ^g` with every minimizer,
/// sorted lexicographically. The canonical minimizer is the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticMinimum {
    pub value: Rational,
    pub argmin: Vec<LatticeVector>,
}

impl QuadraticMinimum {
    pub fn canonical(&self) -> &LatticeVector {
        &self.argmin[0]
    }
}

/// A positive-definite form prepared for repeated minimization and
/// enumeration: the LLL-reduced basis and its LDLᵀ are computed once.
#[derive(Clone, Debug)]
pub struct QuadraticMinimizer {
    form: GramForm,
    reduction: LllReduction,
    inverse: IntMatrix,
}

/// Above this rank only the nearest rounding seeds the search instead of all
/// `2^g` floor/ceil combinations.
const FULL_ROUNDING_RANK: usize = 10;

impl QuadraticMinimizer {
    pub fn new(form: &GramForm) -> Self {
        let reduction = lll_reduce(form);
        let inverse = reduction.transform.unimodular_inverse().expect("LLL transform is unimodular");
        QuadraticMinimizer { form: form.clone(), reduction, inverse }
    }

    pub fn form(&self) -> &GramForm {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn reduction(&self) -> &LllReduction {
        &self.reduction
    }

    fn to_original(&self, m: &[i64]) -> LatticeVector {
        self.reduction.transform.mul_vec(m)
    }

    pub fn minimize(&self, linear: &[Rational], constant: &Rational) -> Result<QuadraticMinimum, LatticeError> {
        self.form.check_len(linear.len())?;
        let g = self.rank();
        let u = &self.reduction.transform;
        let reduced = &self.reduction.reduced;
        // n = U m turns ℓᵀn into (Uᵀℓ)ᵀm
        let lin: Vec<Rational> = (0..g).map(|j| dot_int(&u.column(j), linear)).collect();
        let neg: Vec<Rational> = lin.iter().map(|x| -x).collect();
        let center = reduced.ldlt().solve(&neg);
        let floor_value = constant + half() * dot(&lin, &center);
        let objective = |m: &[i64]| -> Rational {
            let mr: Vec<Rational> = m.iter().map(|&x| int(x)).collect();
            reduced.half_norm(&mr) + dot_int(m, &lin) + constant
        };

        let mut seed = objective(&center.iter().map(round_i64).collect::<Vec<_>>());
        if g <= FULL_ROUNDING_RANK {
            for mask in 0u32..(1 << g) {
                let m: Vec<i64> = center
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if mask & (1 << i) == 0 { floor_i64(c) } else { ceil_i64(c) })
                    .collect();
                let v = objective(&m);
                if v < seed {
                    seed = v;
                }
            }
        }

        let bound = (&seed - &floor_value) * int(2);
        let mut best: Option<Rational> = None;
        let mut argmin: Vec<LatticeVector> = Vec::new();
        fincke_pohst(reduced.ldlt(), &center, &bound, &mut |m| {
            let v = objective(m);
            match &best {
                Some(b) if v > *b => {}
                Some(b) if v == *b => argmin.push(m.to_vec()),
                _ => {
                    best = Some(v);
                    argmin.clear();
                    argmin.push(m.to_vec());
                }
            }
        });
        let value = best.expect("seed point lies inside the search ellipsoid");
        let mut argmin: Vec<LatticeVector> = argmin.iter().map(|m| self.to_original(m)).collect();
        argmin.sort();
        Ok(QuadraticMinimum { value, argmin })
    }

    /// All `n` with `½ (n − center)ᵀ B (n − center) ≤ radius`, sorted.
    pub fn enumerate_below(&self, center: &[Rational], radius: &Rational) -> Result<Vec<LatticeVector>, LatticeError> {
        self.form.check_len(center.len())?;
        if radius.is_negative() {
            return Err(LatticeError::NegativeRadius);
        }
        let inv = &self.inverse;
        let reduced_center: Vec<Rational> = (0..self.rank())
            .map(|i| {
                inv.row(i)
                    .iter()
                    .zip(center)
                    .fold(Rational::zero(), |acc, (a, c)| acc + c * BigInt::from(*a))
            })
            .collect();
        let mut out = Vec::new();
        fincke_pohst(self.reduction.reduced.ldlt(), &reduced_center, &(radius * int(2)), &mut |m| {
            out.push(self.to_original(m));
        });
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// One-shot form of [`QuadraticMinimizer::minimize`].
pub fn minimize_quadratic(
    form: &GramForm,
    linear: &[Rational],
    constant: &Rational,
) -> Result<QuadraticMinimum, LatticeError> {
    QuadraticMinimizer::new(form).minimize(linear, constant)
}

/// One-shot form of [`QuadraticMinimizer::enumerate_below`].
pub fn enumerate_below(
    form: &GramForm,
    center: &[Rational],
    radius: &Rational,
) -> Result<Vec<LatticeVector>, LatticeError> {
    QuadraticMinimizer::new(form).enumerate_below(center, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn brute_min(b: &[&[i64]], lin: &[Rational], box_: i64) -> (Rational, Vec<LatticeVector>) {
        let g = b.len();
        let mut best: Option<Rational> = None;
        let mut arg = Vec::new();
        let mut n = vec![-box_; g];
        loop {
            let mut v = Rational::zero();
            for i in 0..g {
                for j in 0..g {
                    v += half() * int(b[i][j] * n[i] * n[j]);
                }
                v += &lin[i] * int(n[i]);
            }
            match &best {
                Some(x) if v > *x => {}
                Some(x) if v == *x => arg.push(n.clone()),
                _ => {
                    best = Some(v);
                    arg = vec![n.clone()];
                }
            }
            let mut i = 0;
            loop {
                if i == g {
                    arg.sort();
                    return (best.unwrap(), arg);
                }
                n[i] += 1;
                if n[i] <= box_ {
                    break;
                }
                n[i] = -box_;
                i += 1;
            }
        }
    }

    #[test]
    fn window_edges() {
        assert_eq!(integer_window(&int(0), &int(1)), Some((-1, 1)));
        assert_eq!(integer_window(&rat(1, 2), &rat(1, 4)), Some((0, 1)));
        assert_eq!(integer_window(&rat(1, 2), &rat(1, 5)), None);
        assert_eq!(integer_window(&int(3), &int(0)), Some((3, 3)));
        assert_eq!(integer_window(&int(3), &int(-1)), None);
    }

    #[test]
    fn spec_examples() {
        let b1 = GramForm::from_ints(&[&[2]]).unwrap();
        let m = minimize_quadratic(&b1, &[int(0)], &int(0)).unwrap();
        assert_eq!((m.value, m.argmin), (int(0), vec![vec![0]]));

        let m = minimize_quadratic(&b1, &[rat(-3, 2)], &int(0)).unwrap();
        assert_eq!(brute_min(&[&[2]], &[rat(-3, 2)], 10), (rat(-1, 2), vec![vec![1]]));
        assert_eq!((m.value, m.argmin), (rat(-1, 2), vec![vec![1]]));

        let m = minimize_quadratic(&b1, &[int(-1)], &int(0)).unwrap();
        assert_eq!(brute_min(&[&[2]], &[int(-1)], 10), (int(0), vec![vec![0], vec![1]]));
        assert_eq!((m.value, m.argmin), (int(0), vec![vec![0], vec![1]]));

        let b2 = GramForm::from_ints(&[&[2, 1], &[1, 2]]).unwrap();
        let lin = [int(-2), int(-1)];
        let m = minimize_quadratic(&b2, &lin, &int(0)).unwrap();
        assert_eq!(brute_min(&[&[2, 1], &[1, 2]], &lin, 5), (int(-1), vec![vec![1, 0]]));
        assert_eq!((m.value, m.argmin), (int(-1), vec![vec![1, 0]]));
    }

    #[test]
    fn constant_offsets_value() {
        let b = GramForm::from_ints(&[&[2]]).unwrap();
        let m = minimize_quadratic(&b, &[rat(-3, 2)], &rat(7, 3)).unwrap();
        assert_eq!(m.value, rat(-1, 2) + rat(7, 3));
    }

    #[test]
    fn enumerate_examples() {
        let b1 = GramForm::from_ints(&[&[2]]).unwrap();
        assert_eq!(enumerate_below(&b1, &[int(0)], &int(0)).unwrap(), vec![vec![0]]);
        assert_eq!(enumerate_below(&b1, &[int(0)], &int(1)).unwrap(), vec![vec![-1], vec![0], vec![1]]);
        let b2 = GramForm::from_ints(&[&[2, 1], &[1, 2]]).unwrap();
        assert_eq!(
            enumerate_below(&b2, &[int(0), int(0)], &int(1)).unwrap(),
            vec![vec![-1, 0], vec![-1, 1], vec![0, -1], vec![0, 0], vec![0, 1], vec![1, -1], vec![1, 0]]
        );
        assert_eq!(enumerate_below(&b1, &[int(0)], &int(-1)), Err(LatticeError::NegativeRadius));
        assert_eq!(
            enumerate_below(&b1, &[int(0), int(1)], &int(1)),
            Err(LatticeError::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn skewed_form_uses_reduced_basis() {
        let b = GramForm::from_ints(&[&[5, 4], &[4, 5]]).unwrap();
        let lin = [rat(7, 3), int(-4)];
        let m = minimize_quadratic(&b, &lin, &int(0)).unwrap();
        assert_eq!((m.value, m.argmin), brute_min(&[&[5, 4], &[4, 5]], &lin, 12));
    }
}
