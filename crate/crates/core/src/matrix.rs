//! Small dense matrices over the rationals and the integers.
//!
//! Dimensions in this crate are tiny (rank of a lattice), so everything is a
//! row-major `Vec` with cubic-time elimination. Shape mismatches inside the
//! crate are programming errors and panic; shapes coming from user input are
//! checked with [`ShapeError`] at construction.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("matrix has no rows")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("expected a {expected}x{expected} matrix, found {rows}x{cols}")]
    NotSquare { expected: usize, rows: usize, cols: usize },
}

fn check_rows<T>(rows: &[Vec<T>]) -> Result<(usize, usize), ShapeError> {
    let first = rows.first().ok_or(ShapeError::Empty)?;
    let cols = first.len();
    if cols == 0 {
        return Err(ShapeError::Empty);
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(ShapeError::Ragged { row: i, found: r.len(), expected: cols });
        }
    }
    Ok((rows.len(), cols))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ShapeError> {
        let (r, c) = check_rows(&rows)?;
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for integer literals; panics on ragged input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        Self::from_rows(rows).expect("ragged matrix literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_int(&self, other: &IntMatrix) -> RatMatrix {
        self.mul(&other.to_rational())
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn mul_int_vec(&self, v: &[i64]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(_, x)| **x != 0)
                    .fold(Rational::zero(), |acc, (a, x)| acc + a * BigInt::from(*x))
            })
            .collect()
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Row-reduces a copy of `self` augmented with `rhs`; returns the
    /// determinant and, when nonsingular, the solution of `self·X = rhs`.
    fn eliminate(&self, rhs: Option<&RatMatrix>) -> (Rational, Option<RatMatrix>) {
        assert!(self.is_square(), "elimination needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.cloned();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return (Rational::zero(), None);
            };
            if p != col {
                a.swap_rows(p, col);
                if let Some(b) = b.as_mut() {
                    b.swap_rows(p, col);
                }
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det *= &pivot;
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] / &pivot;
                for c in col..n {
                    let d = &f * &a[(col, c)];
                    a[(r, c)] -= d;
                }
                if let Some(b) = b.as_mut() {
                    for c in 0..b.cols {
                        let d = &f * &b[(col, c)];
                        b[(r, c)] -= d;
                    }
                }
            }
        }
        if let Some(b) = b.as_mut() {
            for r in 0..n {
                let p = a[(r, r)].clone();
                for c in 0..b.cols {
                    b[(r, c)] /= &p;
                }
            }
        }
        (det, b)
    }

    pub fn determinant(&self) -> Rational {
        self.eliminate(None).0
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        self.eliminate(Some(&Self::identity(self.rows))).1
    }

    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        let b = RatMatrix { rows: rhs.len(), cols: 1, data: rhs.to_vec() };
        self.eliminate(Some(&b)).1.map(|x| x.data)
    }

    /// Converts to an integer matrix if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        let data = self
            .data
            .iter()
            .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn max_abs_entry_sum(&self) -> Rational {
        self.data.iter().fold(Rational::zero(), |acc, x| acc + x.abs())
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, ShapeError> {
        let (r, c) = check_rows(&rows)?;
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("ragged matrix literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out[(i, j)] = (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum();
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn scale(&self, s: i64) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| int(x)).collect() }
    }

    pub fn determinant(&self) -> i64 {
        let d = self.to_rational().determinant();
        d.to_integer().to_i64().expect("determinant out of i64 range")
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        if self.determinant().abs() != 1 {
            return None;
        }
        self.to_rational().inverse()?.to_integer()
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `col[target] += factor * col[source]`
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: i64) {
        for r in 0..self.rows {
            let v = self[(r, source)];
            self[(r, target)] += factor * v;
        }
    }

    pub(crate) fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            self[(r, c)] = -self[(r, c)];
        }
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.data.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `vᵀ M w` for integer vectors against a rational matrix.
pub fn bilinear_int(m: &RatMatrix, v: &[i64], w: &[i64]) -> Rational {
    let mw = m.mul_int_vec(w);
    crate::rational::dot_int(v, &mw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn determinant_and_inverse() {
        let m = RatMatrix::from_ints(&[&[2, 1], &[1, 2]]);
        assert_eq!(m.determinant(), int(3));
        let inv = m.inverse().unwrap();
        assert_eq!(inv.mul(&m), RatMatrix::identity(2));
        assert_eq!(inv[(0, 1)], rat(-1, 3));
        let singular = RatMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.determinant(), int(0));
    }

    #[test]
    fn permuted_pivot() {
        let m = RatMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant(), int(-1));
        assert_eq!(m.solve(&[int(3), int(4)]).unwrap(), vec![int(4), int(3)]);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(matches!(
            IntMatrix::from_rows(vec![vec![1, 2], vec![3]]),
            Err(ShapeError::Ragged { row: 1, .. })
        ));
        assert_eq!(IntMatrix::from_rows(vec![]), Err(ShapeError::Empty));
    }

    #[test]
    fn unimodular_inverse() {
        let u = IntMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        let inv = u.unimodular_inverse().unwrap();
        assert_eq!(u.mul(&inv), IntMatrix::identity(2));
        assert!(IntMatrix::from_ints(&[&[2]]).unimodular_inverse().is_none());
    }
}
