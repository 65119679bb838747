//! Small exact polyhedral helpers for dimensions up to 3.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::matrix::RatMatrix;
use crate::rational::{dot, dot_int, int_vec, Rational};

/// `⟨normal, x⟩ ≥ offset`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Vec<i64>,
    pub offset: Rational,
}

impl HalfSpace {
    pub fn slack(&self, x: &[Rational]) -> Rational {
        dot_int(&self.normal, x) - &self.offset
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }
}

/// Rank over ℚ by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] / &pivot;
            for k in c..cols {
                let d = &f * &rows[r][k];
                rows[i][k] -= d;
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the affine span; `None` for an empty set.
pub fn affine_rank(points: &[Vec<Rational>]) -> Option<usize> {
    let first = points.first()?;
    Some(rank(points[1..].iter().map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect()).collect()))
}

pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Vertices of `{x : all constraints}` in sorted order.
pub fn vertices(constraints: &[HalfSpace], g: usize) -> Vec<Vec<Rational>> {
    let mut out = BTreeSet::new();
    for_each_subset(constraints.len(), g, &mut |idx| {
        let m = RatMatrix::from_rows(idx.iter().map(|&i| int_vec(&constraints[i].normal)).collect())
            .expect("square system");
        let rhs: Vec<Rational> = idx.iter().map(|&i| constraints[i].offset.clone()).collect();
        if let Some(x) = m.solve(&rhs) {
            if constraints.iter().all(|h| h.contains(&x)) {
                out.insert(x);
            }
        }
    });
    out.into_iter().collect()
}

/// Direction spanning the common kernel of `g − 1` rows in dimension `g ≤ 3`,
/// zero when the rows are dependent.
fn kernel_line(rows: &[Vec<Rational>], g: usize) -> Vec<Rational> {
    match g {
        1 => vec![Rational::from_integer(1.into())],
        2 => vec![-rows[0][1].clone(), rows[0][0].clone()],
        3 => cross(&rows[0], &rows[1]),
        _ => unreachable!("dimension capped at 3"),
    }
}

pub fn cross(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Whether `{x : all constraints}` contains no ray, for `g ≤ 3`. An empty
/// recession cone is certified by rank `g` and no extreme ray.
pub fn is_bounded(constraints: &[HalfSpace], g: usize) -> bool {
    let normals: Vec<Vec<Rational>> = constraints.iter().map(|h| int_vec(&h.normal)).collect();
    if rank(normals.clone()) < g {
        return false;
    }
    let mut ray = false;
    for_each_subset(normals.len(), g - 1, &mut |idx| {
        if ray {
            return;
        }
        let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| normals[i].clone()).collect();
        let d = kernel_line(&rows, g);
        if d.iter().all(Zero::is_zero) {
            return;
        }
        for sign in [1i64, -1] {
            let s = Rational::from_integer(sign.into());
            let dir: Vec<Rational> = d.iter().map(|x| x * &s).collect();
            if normals.iter().all(|n| !dot(n, &dir).is_negative()) {
                ray = true;
            }
        }
    });
    !ray
}

/// Lexicographically positive multiple of `v` (first nonzero entry positive).
pub fn lex_positive(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.iter().map(|a| -a).collect(),
        _ => v.to_vec(),
    }
}

/// Indices of a planar convex polygon in `ℝ³` in counterclockwise order
/// seen from the tip of `normal`, starting at the smallest point.
pub fn cyclic_order(points: &[Vec<Rational>], normal: &[Rational]) -> Vec<usize> {
    let n = points.len();
    let k = Rational::from_integer((n as i64).into());
    let centre: Vec<Rational> = (0..3).map(|i| points.iter().map(|p| p[i].clone()).sum::<Rational>() / &k).collect();
    let rel: Vec<Vec<Rational>> = points.iter().map(|p| p.iter().zip(&centre).map(|(a, b)| a - b).collect()).collect();
    let e1 = rel.iter().find(|r| r.iter().any(|x| !x.is_zero())).cloned().unwrap_or_else(|| vec![Rational::zero(); 3]);
    let e2 = cross(normal, &e1);
    let coords: Vec<(Rational, Rational)> = rel.iter().map(|r| (dot(r, &e1), dot(r, &e2))).collect();
    // upper half plane (y > 0, or y = 0 and x > 0) first, then by cross product
    let half = |(x, y): &(Rational, Rational)| y.is_negative() || (y.is_zero() && x.is_negative());
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        let (pa, pb) = (&coords[a], &coords[b]);
        half(pa).cmp(&half(pb)).then_with(|| {
            let c = &pa.0 * &pb.1 - &pa.1 * &pb.0;
            if c.is_positive() {
                Ordering::Less
            } else if c.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
    let start = (0..n).min_by(|&a, &b| points[idx[a]].cmp(&points[idx[b]])).unwrap_or(0);
    idx.rotate_left(start);
    idx
}

/// Clips a convex polygon (cyclic vertex list) or segment against the
/// half-spaces `⟨a, x⟩ ≥ b`, all in exact arithmetic.
pub fn clip(points: &[Vec<Rational>], planes: &[(Vec<Rational>, Rational)]) -> Vec<Vec<Rational>> {
    let closed = points.len() > 2;
    let mut cur = points.to_vec();
    for (a, b) in planes {
        if cur.is_empty() {
            break;
        }
        let s: Vec<Rational> = cur.iter().map(|p| dot(a, p) - b).collect();
        let mut next = Vec::new();
        let m = cur.len();
        let edges = if closed { m } else { m.saturating_sub(1) };
        if m == 1 && !s[0].is_negative() {
            next.push(cur[0].clone());
        }
        for i in 0..edges {
            let j = (i + 1) % m;
            let (p, q) = (&cur[i], &cur[j]);
            let (sp, sq) = (&s[i], &s[j]);
            if !sp.is_negative() {
                next.push(p.clone());
            }
            if (sp.is_negative() && sq.is_positive()) || (sp.is_positive() && sq.is_negative()) {
                let t = sp / (sp - sq);
                next.push(p.iter().zip(q).map(|(x, y)| x + (y - x) * &t).collect());
            }
            if !closed && i + 1 == edges && !sq.is_negative() {
                next.push(q.clone());
            }
        }
        next.dedup();
        if closed && next.len() > 1 && next.first() == next.last() {
            next.pop();
        }
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn hs(n: &[i64], o: Rational) -> HalfSpace {
        HalfSpace { normal: n.to_vec(), offset: o }
    }

    #[test]
    fn square_vertices() {
        let c = [hs(&[1, 0], int(0)), hs(&[-1, 0], int(-1)), hs(&[0, 1], int(0)), hs(&[0, -1], int(-1)), hs(&[1, 1], int(-5))];
        let v = vertices(&c, 2);
        assert_eq!(v, vec![vec![int(0), int(0)], vec![int(0), int(1)], vec![int(1), int(0)], vec![int(1), int(1)]]);
        assert!(is_bounded(&c, 2));
        assert!(!is_bounded(&c[..3], 2));
        assert!(!is_bounded(&[hs(&[1, 0], int(0)), hs(&[-1, 0], int(-1))], 2));
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(vec![vec![int(1), int(2)], vec![int(2), int(4)]]), 1);
        assert_eq!(affine_rank(&[vec![int(0), int(0)], vec![int(1), int(1)], vec![int(2), int(2)]]), Some(1));
        assert_eq!(affine_rank(&[]), None);
    }

    #[test]
    fn clipping() {
        let unit = vec![
            (vec![int(1), int(0)], int(0)),
            (vec![int(-1), int(0)], int(-1)),
            (vec![int(0), int(1)], int(0)),
            (vec![int(0), int(-1)], int(-1)),
        ];
        let seg = clip(&[vec![rat(-1, 2), rat(1, 2)], vec![rat(3, 2), rat(1, 2)]], &unit);
        assert_eq!(seg, vec![vec![int(0), rat(1, 2)], vec![int(1), rat(1, 2)]]);
        let outside = clip(&[vec![int(2), int(2)], vec![int(3), int(3)]], &unit);
        assert!(outside.is_empty());
        let tri = clip(&[vec![int(-1), int(0)], vec![int(1), int(0)], vec![int(0), int(2)]], &unit);
        assert_eq!(affine_rank(&tri), Some(2));
    }

    #[test]
    fn cyclic_square() {
        let pts = vec![
            vec![int(0), int(0), int(0)],
            vec![int(1), int(1), int(0)],
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
        ];
        let order = cyclic_order(&pts, &[int(0), int(0), int(1)]);
        assert_eq!(order, vec![0, 2, 1, 3]);
    }
}
