//! Restriction of theta functions to segments `x(t) = a + t(b − a)`, `t ∈ [0, 1]`.

use num_traits::{One, Zero};

use super::PlError;
use crate::lattice::LatticeVector;
use crate::rational::{dot_int, Rational};
use crate::trop_av::TropPoint;
use crate::trop_theta::{PeriodicPLFunction, TropicalThetaFunction};

/// `f(x(t)) = w + ⟨gradient, x(t)⟩` for `t ∈ [start, end]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearPiece {
    pub start: Rational,
    pub end: Rational,
    pub gradient: Vec<i64>,
    pub w: Rational,
}

impl LinearPiece {
    pub fn value_at(&self, x: &[Rational]) -> Rational {
        &self.w + dot_int(&self.gradient, x)
    }
}

fn point(a: &TropPoint, d: &[Rational], t: &Rational) -> TropPoint {
    TropPoint::new(a.coords.iter().zip(d).map(|(x, y)| x + y * t).collect())
}

/// Terms of `theta` restricted to the line: `(value, slope)` as functions of `t`.
struct Line<'a> {
    theta: &'a TropicalThetaFunction,
    a: TropPoint,
    d: Vec<Rational>,
}

impl Line<'_> {
    fn at(&self, t: &Rational) -> TropPoint {
        point(&self.a, &self.d, t)
    }

    fn term(&self, u: &[i64], t: &Rational) -> Rational {
        self.theta.term_value(u, &self.at(t)).finite().expect("witness term is finite").clone()
    }

    fn slope(&self, u: &[i64]) -> Rational {
        dot_int(u, &self.d)
    }

    /// The witness winning just right (`right = true`) or left of `t`.
    fn winner(&self, t: &Rational, right: bool) -> Result<LatticeVector, PlError> {
        let at = self.theta.evaluate(&self.at(t))?;
        let pick = at.witnesses.into_iter().map(|u| (self.slope(&u), u));
        let best = if right { pick.min() } else { pick.max() };
        Ok(best.expect("nonempty witness set").1)
    }

    fn split(&self, t0: Rational, u0: LatticeVector, t1: Rational, u1: LatticeVector, out: &mut Vec<(Rational, Rational, LatticeVector)>) -> Result<(), PlError> {
        let (s0, s1) = (self.slope(&u0), self.slope(&u1));
        if u0 == u1 || s0 == s1 {
            out.push((t0, t1, u0));
            return Ok(());
        }
        // a_{u0}(t) = a_{u1}(t)
        let c0 = self.term(&u0, &Rational::zero());
        let c1 = self.term(&u1, &Rational::zero());
        let t = (&c1 - &c0) / (&s0 - &s1);
        let val = self.theta.value(&self.at(&t))?;
        if val == &c0 + &s0 * &t {
            out.push((t0, t.clone(), u0));
            out.push((t, t1, u1));
            return Ok(());
        }
        let left = self.winner(&t, false)?;
        let right = self.winner(&t, true)?;
        self.split(t0, u0, t.clone(), left, out)?;
        self.split(t, right, t1, u1, out)
    }
}

/// Maximal linear pieces of `θ` along the segment from `a` to `b`.
pub fn segment_pieces(theta: &TropicalThetaFunction, a: &TropPoint, b: &TropPoint) -> Result<Vec<LinearPiece>, PlError> {
    let line = Line { theta, a: a.clone(), d: b.sub(a).coords };
    let (zero, one) = (Rational::zero(), Rational::one());
    let mut raw = Vec::new();
    let (u0, u1) = (line.winner(&zero, true)?, line.winner(&one, false)?);
    line.split(zero, u0, one, u1, &mut raw)?;
    let mut pieces: Vec<LinearPiece> = Vec::new();
    for (s, e, u) in raw {
        if s == e {
            continue;
        }
        let w = theta.profile_value(&u).finite().expect("witness term is finite").clone();
        match pieces.last_mut() {
            Some(p) if p.gradient == u => p.end = e,
            _ => pieces.push(LinearPiece { start: s, end: e, gradient: u, w }),
        }
    }
    Ok(pieces)
}

/// Linear pieces of `h = Σ mult·θ(· + shift)` along a segment: the common
/// refinement of each term's breakpoints.
pub fn periodic_segment_pieces(h: &PeriodicPLFunction, a: &TropPoint, b: &TropPoint) -> Result<Vec<LinearPiece>, PlError> {
    let terms = h.expr().terms();
    let mut per_term = Vec::new();
    let mut cuts: Vec<Rational> = vec![Rational::zero(), Rational::one()];
    for t in terms {
        let pieces = segment_pieces(&t.theta, &a.add(&t.shift), &b.add(&t.shift))?;
        cuts.extend(pieces.iter().map(|p| p.start.clone()));
        per_term.push(pieces);
    }
    cuts.sort();
    cuts.dedup();
    let mut out: Vec<LinearPiece> = Vec::new();
    for win in cuts.windows(2) {
        let (s, e) = (&win[0], &win[1]);
        let mid = (s + e) / Rational::from_integer(2.into());
        let mut gradient = vec![0i64; a.dim()];
        let mut w = Rational::zero();
        for (term, pieces) in terms.iter().zip(&per_term) {
            let p = pieces.iter().find(|p| p.start <= mid && mid <= p.end).expect("pieces cover [0, 1]");
            let m = term.multiplicity;
            for (g, u) in gradient.iter_mut().zip(&p.gradient) {
                *g += m * u;
            }
            // w + ⟨u, x + shift⟩ folded into the constant
            w += (&p.w + term.shift.pair(&p.gradient)) * Rational::from_integer(m.into());
        }
        match out.last_mut() {
            Some(p) if p.gradient == gradient && p.w == w => p.end = e.clone(),
            _ => out.push(LinearPiece { start: s.clone(), end: e.clone(), gradient, w }),
        }
    }
    Ok(out)
}
