//! JSON input and output formats. Fractions travel as `"p/q"` strings;
//! plain integers are accepted on input too.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::LatticeVector;
use crate::matrix::{IntMatrix, RatMatrix};
use crate::na_theta::{build_riemann_theta, NACocycle, NAThetaFunction, NaError, PeriodMatrix};
use crate::puiseux::PuiseuxNumber;
use crate::rational::{fmt_rational, parse_rational, ExtRational, Rational};
use crate::trop_av::{TropAvError, TropicalPolarizationData};
use crate::trop_theta::{
    riemann_theta, AutomorphyFactor, ProfileEntry, ThetaError, TropicalThetaFunction, ValuationProfile,
};

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid number {0:?}")]
    Number(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    TropAv(#[from] TropAvError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Na(#[from] NaError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn rational(&self) -> Result<Rational, SchemaError> {
        match self {
            Num::Int(n) => Ok(Rational::from_integer((*n).into())),
            Num::Text(s) => parse_rational(s).map_err(|_| SchemaError::Number(s.clone())),
        }
    }

    pub fn ext(&self) -> Result<ExtRational, SchemaError> {
        match self {
            Num::Text(s) if s.trim() == "inf" => Ok(ExtRational::Infinity),
            other => other.rational().map(ExtRational::Finite),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Num::Text(fmt_rational(r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizationFile {
    pub g: usize,
    #[serde(rename = "P")]
    pub p: Vec<Vec<Num>>,
    #[serde(rename = "Lambda")]
    pub lambda: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    #[serde(rename = "Lambda")]
    pub lambda: Vec<Vec<i64>>,
    pub ell: Vec<Num>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntryJson {
    pub rep: LatticeVector,
    pub w: Num,
}

/// Polarization plus an optional theta function; without `factor` the file
/// describes the Riemann theta function of the polarization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaFile {
    #[serde(flatten)]
    pub base: PolarizationFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<FactorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<ProfileEntryJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub rep: LatticeVector,
    pub a: String,
}

/// Non-Archimedean data. Without `c` the cocycle is the symmetric square-root
/// one (principal `Λ` only); without `coeffs` the function is `a_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaFile {
    #[serde(rename = "T")]
    pub t: Vec<Vec<String>>,
    #[serde(rename = "Lambda")]
    pub lambda: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<CoeffJson>>,
    /// Numerator and denominator for the rational-function suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<Box<NaPair>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaPair {
    pub numerator: NaFile,
    pub denominator: NaFile,
}

fn int_matrix(rows: &[Vec<i64>], name: &str) -> Result<IntMatrix, SchemaError> {
    IntMatrix::from_rows(rows.to_vec()).map_err(|e| SchemaError::Shape(format!("{name}: {e}")))
}

fn puiseux(s: &str) -> Result<PuiseuxNumber, SchemaError> {
    s.parse().map_err(|e: crate::puiseux::PuiseuxError| NaError::from(e).into())
}

impl PolarizationFile {
    pub fn matrices(&self) -> Result<(RatMatrix, IntMatrix), SchemaError> {
        let rows = self.p.iter().map(|r| r.iter().map(Num::rational).collect()).collect::<Result<Vec<_>, _>>()?;
        let p = RatMatrix::from_rows(rows).map_err(|e| SchemaError::Shape(format!("P: {e}")))?;
        let lambda = int_matrix(&self.lambda, "Lambda")?;
        if p.rows() != self.g || lambda.rows() != self.g {
            return Err(SchemaError::Shape(format!("g = {} but P has {} rows and Lambda {}", self.g, p.rows(), lambda.rows())));
        }
        Ok((p, lambda))
    }

    pub fn data(&self) -> Result<TropicalPolarizationData, SchemaError> {
        let (p, l) = self.matrices()?;
        Ok(TropicalPolarizationData::new(p, l)?)
    }

    pub fn from_data(data: &TropicalPolarizationData) -> Self {
        PolarizationFile {
            g: data.g(),
            p: data.pairing().to_rows().iter().map(|r| r.iter().map(Num::from_rational).collect()).collect(),
            lambda: data.lambda().to_rows(),
        }
    }
}

impl ThetaFile {
    pub fn theta(&self) -> Result<TropicalThetaFunction, SchemaError> {
        let data = Arc::new(self.base.data()?);
        let g = data.g();
        let Some(factor) = &self.factor else {
            if self.profile.is_some() {
                return Err(SchemaError::Shape("a profile needs a factor".into()));
            }
            return Ok(riemann_theta(&data)?);
        };
        let lambda = int_matrix(&factor.lambda, "factor.Lambda")?;
        let ell = factor.ell.iter().map(Num::rational).collect::<Result<Vec<_>, _>>()?;
        let profile = match &self.profile {
            None => ValuationProfile::origin(g),
            Some(entries) => ValuationProfile::new(
                entries
                    .iter()
                    .map(|e| Ok(ProfileEntry { rep: e.rep.clone(), w: e.w.ext()? }))
                    .collect::<Result<Vec<_>, SchemaError>>()?,
            ),
        };
        Ok(TropicalThetaFunction::new(data, AutomorphyFactor::new(lambda, ell), profile)?)
    }

    pub fn from_theta(theta: &TropicalThetaFunction) -> Self {
        let f = theta.factor();
        ThetaFile {
            base: PolarizationFile::from_data(theta.base()),
            factor: Some(FactorJson { lambda: f.lambda.to_rows(), ell: f.ell.iter().map(Num::from_rational).collect() }),
            profile: Some(
                theta
                    .profile()
                    .entries
                    .iter()
                    .map(|e| ProfileEntryJson {
                        rep: e.rep.clone(),
                        w: match &e.w {
                            ExtRational::Finite(r) => Num::from_rational(r),
                            ExtRational::Infinity => Num::Text("inf".into()),
                        },
                    })
                    .collect(),
            ),
        }
    }
}

impl NaFile {
    pub fn period(&self) -> Result<PeriodMatrix, SchemaError> {
        let rows = self.t.iter().map(|r| r.iter().map(|s| puiseux(s)).collect()).collect::<Result<Vec<_>, _>>()?;
        Ok(PeriodMatrix::new(rows)?)
    }

    pub fn lambda_matrix(&self) -> Result<IntMatrix, SchemaError> {
        int_matrix(&self.lambda, "Lambda")
    }

    pub fn cocycle(&self, period: &PeriodMatrix) -> Result<NACocycle, SchemaError> {
        let lambda = self.lambda_matrix()?;
        match &self.c {
            Some(c) => {
                let gens = c.iter().map(|s| puiseux(s)).collect::<Result<Vec<_>, _>>()?;
                Ok(NACocycle::from_period(period, lambda, gens)?)
            }
            None => Ok(build_riemann_theta(period, &lambda)?.cocycle().as_ref().clone()),
        }
    }

    pub fn function(&self) -> Result<NAThetaFunction, SchemaError> {
        let period = self.period()?;
        let cocycle = self.cocycle(&period)?;
        let g = period.g();
        let anchors: BTreeMap<LatticeVector, PuiseuxNumber> = match &self.coeffs {
            None => [(vec![0; g], PuiseuxNumber::one())].into_iter().collect(),
            Some(cs) => cs.iter().map(|c| Ok((c.rep.clone(), puiseux(&c.a)?))).collect::<Result<_, SchemaError>>()?,
        };
        Ok(NAThetaFunction::new(Arc::new(period), Arc::new(cocycle), anchors)?)
    }
}

/// Which kind of input a JSON document holds, judged by its keys.
#[derive(Clone, Debug)]
pub enum InputFile {
    Theta(ThetaFile),
    NonArchimedean(NaFile),
}

pub fn parse_input(text: &str) -> Result<InputFile, SchemaError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("T").is_some() {
        Ok(InputFile::NonArchimedean(serde_json::from_value(value)?))
    } else {
        Ok(InputFile::Theta(serde_json::from_value(value)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::trop_av::TropPoint;

    #[test]
    fn riemann_file() {
        let text = r#"{"g": 1, "P": [["2/1"]], "Lambda": [[1]]}"#;
        let InputFile::Theta(f) = parse_input(text).unwrap() else { panic!() };
        let th = f.theta().unwrap();
        assert_eq!(th.value(&TropPoint::new(vec![rat(-3, 2)])).unwrap(), rat(-1, 2));
    }

    #[test]
    fn profile_round_trip() {
        let text = r#"{"g": 1, "P": [[2]], "Lambda": [[1]],
            "factor": {"Lambda": [[2]], "ell": ["0/1"]},
            "profile": [{"rep": [0], "w": "0"}, {"rep": [1], "w": "1/2"}]}"#;
        let InputFile::Theta(f) = parse_input(text).unwrap() else { panic!() };
        let th = f.theta().unwrap();
        let back = ThetaFile::from_theta(&th);
        assert_eq!(back.theta().unwrap(), th);
        let inf = r#"{"g": 1, "P": [[2]], "Lambda": [[1]],
            "factor": {"Lambda": [[2]], "ell": [0]},
            "profile": [{"rep": [0], "w": "inf"}, {"rep": [1], "w": 0}]}"#;
        let InputFile::Theta(f) = parse_input(inf).unwrap() else { panic!() };
        assert_eq!(f.theta().unwrap().profile_value(&[0]), ExtRational::Infinity);
    }

    #[test]
    fn na_file() {
        let text = r#"{"T": [["q^2"]], "Lambda": [[1]]}"#;
        let InputFile::NonArchimedean(f) = parse_input(text).unwrap() else { panic!() };
        let th = f.function().unwrap();
        assert_eq!(th.coefficient(&[2]), PuiseuxNumber::q_pow(int(4)));
        let bad = r#"{"T": [["q^2"]], "Lambda": [[1]], "c": ["q"], "coeffs": [{"rep": [0], "a": "1"}, {"rep": [1], "a": "q^3"}]}"#;
        let InputFile::NonArchimedean(f) = parse_input(bad).unwrap() else { panic!() };
        assert_eq!(f.function().unwrap().coefficient(&[1]), PuiseuxNumber::q_pow(int(3)));
    }

    #[test]
    fn malformed() {
        assert!(matches!(parse_input("{"), Err(SchemaError::Json(_))));
        let text = r#"{"g": 1, "P": [["x"]], "Lambda": [[1]]}"#;
        let InputFile::Theta(f) = parse_input(text).unwrap() else { panic!() };
        assert!(matches!(f.theta(), Err(SchemaError::Number(_))));
    }
}
