//! Puiseux polynomials over ℚ: finite sums `Σ cᵢ q^{rᵢ}` with rational
//! exponents, valued by `val(x) = min rᵢ`.
//!
//! This is the coefficient field of the non-Archimedean layer. Only finite
//! expressions are ever needed, so there is no completion and no inversion
//! beyond division by monomials.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{parse_rational, ExtRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PuiseuxError {
    #[error("expected a single nonzero term")]
    NotMonomial,
    #[error("coefficient {0} is not the square of a positive rational")]
    CoefficientNotASquare(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse Puiseux term {0:?}")]
    Parse(String),
}

/// Canonical form: nonzero coefficients, strictly increasing exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PuiseuxNumber {
    terms: Vec<(Rational, Rational)>,
}

impl PuiseuxNumber {
    pub fn zero() -> Self {
        PuiseuxNumber { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), Rational::zero())
    }

    /// `coeff · q^exponent`
    pub fn monomial(coeff: Rational, exponent: Rational) -> Self {
        Self::from_terms(vec![(coeff, exponent)])
    }

    /// `q^exponent`
    pub fn q_pow(exponent: Rational) -> Self {
        Self::monomial(Rational::one(), exponent)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Rational::zero())
    }

    /// Builds the canonical form from arbitrary `(coeff, exponent)` pairs.
    pub fn from_terms(mut terms: Vec<(Rational, Rational)>) -> Self {
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            match out.last_mut() {
                Some(last) if last.1 == e => last.0 += c,
                _ => out.push((c, e)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        PuiseuxNumber { terms: out }
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Smallest exponent; `+∞` for zero.
    pub fn val(&self) -> ExtRational {
        match self.terms.first() {
            Some((_, e)) => ExtRational::Finite(e.clone()),
            None => ExtRational::Infinity,
        }
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(c, _)| c)
    }

    fn as_monomial(&self) -> Result<(&Rational, &Rational), PuiseuxError> {
        match self.terms.as_slice() {
            [(c, e)] => Ok((c, e)),
            _ => Err(PuiseuxError::NotMonomial),
        }
    }

    /// `√c · q^{r/2}` for `x = c·q^r` with `c` the square of a positive rational.
    pub fn sqrt_monomial(&self) -> Result<PuiseuxNumber, PuiseuxError> {
        let (c, e) = self.as_monomial()?;
        let not_square = || PuiseuxError::CoefficientNotASquare(crate::rational::fmt_rational(c));
        if !c.is_positive() {
            return Err(not_square());
        }
        let root = |n: &BigInt| {
            let r = n.sqrt();
            (&r * &r == *n).then_some(r)
        };
        let num = root(c.numer()).ok_or_else(not_square)?;
        let den = root(c.denom()).ok_or_else(not_square)?;
        Ok(Self::monomial(Rational::new(num, den), e / Rational::from_integer(2.into())))
    }

    /// Exact quotient by a single nonzero term.
    pub fn divide_by_monomial(&self, m: &PuiseuxNumber) -> Result<PuiseuxNumber, PuiseuxError> {
        if m.is_zero() {
            return Err(PuiseuxError::DivisionByZero);
        }
        let (c, e) = m.as_monomial()?;
        Ok(PuiseuxNumber { terms: self.terms.iter().map(|(a, x)| (a / c, x - e)).collect() })
    }

    /// Integer power of a monomial (negative exponents allowed).
    pub fn monomial_pow(&self, k: i64) -> Result<PuiseuxNumber, PuiseuxError> {
        if k == 0 {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return if k > 0 { Ok(Self::zero()) } else { Err(PuiseuxError::DivisionByZero) };
        }
        let (c, e) = self.as_monomial()?;
        let base = if k > 0 { c.clone() } else { c.recip() };
        let coeff = num_traits::pow(base, k.unsigned_abs() as usize);
        Ok(Self::monomial(coeff, e * Rational::from_integer(k.into())))
    }

    pub fn scale(&self, s: &Rational) -> PuiseuxNumber {
        if s.is_zero() {
            return Self::zero();
        }
        PuiseuxNumber { terms: self.terms.iter().map(|(c, e)| (c * s, e.clone())).collect() }
    }
}

impl Add for &PuiseuxNumber {
    type Output = PuiseuxNumber;
    fn add(self, rhs: &PuiseuxNumber) -> PuiseuxNumber {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            let ord = match (self.terms.get(i), rhs.terms.get(j)) {
                (Some(a), Some(b)) => a.1.cmp(&b.1),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(rhs.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].0 + &rhs.terms[j].0;
                    if !c.is_zero() {
                        out.push((c, self.terms[i].1.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        PuiseuxNumber { terms: out }
    }
}

impl Neg for &PuiseuxNumber {
    type Output = PuiseuxNumber;
    fn neg(self) -> PuiseuxNumber {
        PuiseuxNumber { terms: self.terms.iter().map(|(c, e)| (-c, e.clone())).collect() }
    }
}

impl Sub for &PuiseuxNumber {
    type Output = PuiseuxNumber;
    fn sub(self, rhs: &PuiseuxNumber) -> PuiseuxNumber {
        self + &(-rhs)
    }
}

impl Mul for &PuiseuxNumber {
    type Output = PuiseuxNumber;
    fn mul(self, rhs: &PuiseuxNumber) -> PuiseuxNumber {
        if self.is_monomial() && rhs.is_monomial() {
            let (a, x) = &self.terms[0];
            let (b, y) = &rhs.terms[0];
            return PuiseuxNumber { terms: vec![(a * b, x + y)] };
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                terms.push((a * b, x + y));
            }
        }
        PuiseuxNumber::from_terms(terms)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PuiseuxNumber {
            type Output = PuiseuxNumber;
            fn $m(self, rhs: PuiseuxNumber) -> PuiseuxNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PuiseuxNumber {
    type Output = PuiseuxNumber;
    fn neg(self) -> PuiseuxNumber {
        -&self
    }
}

fn fmt_compact(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `c1*q^(p1/q1) + c2*q^(p2/q2) + …`, or `0`.
impl fmt::Display for PuiseuxNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (c, e)) in self.terms.iter().enumerate() {
            let body = format!("{}*q^({})", fmt_compact(&c.abs()), fmt_compact(e));
            match (k, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

fn parse_term(raw: &str) -> Result<(Rational, Rational), PuiseuxError> {
    let err = || PuiseuxError::Parse(raw.to_string());
    let t: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-Rational::one(), rest.to_string()),
        None => (Rational::one(), t.trim_start_matches('+').to_string()),
    };
    if body.is_empty() {
        return Err(err());
    }
    let (coeff_part, q_part) = match body.find('q') {
        None => (Some(body.as_str()), None),
        Some(pos) => {
            let head = body[..pos].trim_end_matches('*');
            (if head.is_empty() { None } else { Some(head) }, Some(&body[pos + 1..]))
        }
    };
    let coeff = match coeff_part {
        Some(s) => parse_rational(s.trim_start_matches('(').trim_end_matches(')')).map_err(|_| err())?,
        None => Rational::one(),
    };
    let exponent = match q_part {
        None => Rational::zero(),
        Some("") => Rational::one(),
        Some(rest) => {
            let e = rest.strip_prefix('^').ok_or_else(err)?;
            let e = e.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(e);
            parse_rational(e).map_err(|_| err())?
        }
    };
    Ok((sign * coeff, exponent))
}

impl FromStr for PuiseuxNumber {
    type Err = PuiseuxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PuiseuxError::Parse(s.to_string()));
        }
        // split on top-level + and - (outside parentheses, not leading)
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        let bytes = s.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start => {
                    let prev = s[..i].trim_end();
                    if !prev.ends_with('^') && !prev.ends_with('*') && !prev.is_empty() {
                        parts.push(&s[start..i]);
                        start = i;
                    }
                }
                _ => {}
            }
        }
        parts.push(&s[start..]);
        let terms = parts.into_iter().map(parse_term).collect::<Result<Vec<_>, _>>()?;
        Ok(PuiseuxNumber::from_terms(terms))
    }
}
