use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;
use tropical_theta::na_theta::{
    build_riemann_theta, construct_rational_function, invariance_samples, theta_basis, verify_cocycle,
    verify_invariance, Dominance, NaError,
};
use tropical_theta::pl_geometry::{corner_locus, export_mesh, MeshFormat, PlError};
use tropical_theta::puiseux::PuiseuxNumber;
use tropical_theta::rational::{fmt_point, fmt_rational, parse_point, ExtRational};
use tropical_theta::schema::{parse_input, InputFile, NaFile, SchemaError, ThetaFile};
use tropical_theta::trop_av::{validate, TropAvError, TropPoint, TropicalPolarizationData};
use tropical_theta::trop_theta::{riemann_theta, ThetaError, TropicalThetaFunction};

use crate::report::{Check, RunReport, Status};
use crate::sampling;
use crate::{Cli, Command, Suite};

/// Anything that makes a command unable to run; always exit code 2.
#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
    #[error("invalid point {0:?}")]
    Point(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Na(#[from] NaError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Pl(#[from] PlError),
    #[error(transparent)]
    TropAv(#[from] TropAvError),
}

/// Failures reported in full; the rest are only counted.
const SHOWN_FAILURES: usize = 10;
/// Shifts per sample point in suite A.
const SHIFTS_PER_POINT: usize = 7;
/// Monomial points compared in suite C.
const QUOTIENT_POINTS: usize = 20;

struct Ctx<'a> {
    cli: &'a Cli,
    timings: BTreeMap<String, f64>,
}

impl Ctx<'_> {
    fn timed<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.insert(name.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }
}

pub fn dispatch(cli: &Cli) -> RunReport {
    let (name, path, seeded) = match &cli.command {
        Command::Validate { path } => ("validate", path, true),
        Command::Eval { path, .. } => ("eval", path, false),
        Command::Riemann { path, .. } => ("riemann", path, false),
        Command::Crosscheck { path, suite, .. } => (
            match suite {
                Suite::A => "crosscheck A",
                Suite::B => "crosscheck B",
                Suite::C => "crosscheck C",
            },
            path,
            true,
        ),
        Command::Divisor { path } => ("divisor", path, false),
        Command::Export { path } => ("export", path, false),
    };
    let mut report = RunReport {
        command: name.to_string(),
        input: path.display().to_string(),
        input_sha256: String::new(),
        seed: seeded.then_some(cli.seed),
        samples: seeded.then_some(cli.samples),
        status: Status::Pass,
        checks: Vec::new(),
        error: None,
        timings_ms: None,
    };
    let mut ctx = Ctx { cli, timings: BTreeMap::new() };
    let result = read(path).and_then(|bytes| {
        report.input_sha256 = format!("{:x}", Sha256::digest(&bytes));
        let text = String::from_utf8(bytes).map_err(|_| CliError::Usage("input is not UTF-8".into()))?;
        let input = parse_input(&text)?;
        execute(&mut ctx, &input)
    });
    match result {
        Ok(checks) => {
            if checks.iter().any(|c| c.status != Status::Pass) {
                report.status = Status::Fail;
            }
            report.checks = checks;
        }
        Err(e) => {
            report.status = Status::Error;
            report.error = Some(e.to_string());
        }
    }
    if cli.timings {
        report.timings_ms = Some(ctx.timings);
    }
    report
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Read { path: path.display().to_string(), message: e.to_string() })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Write { path: path.display().to_string(), message: e.to_string() })
}

fn execute(ctx: &mut Ctx, input: &InputFile) -> Result<Vec<Check>, CliError> {
    match &ctx.cli.command {
        Command::Validate { .. } => {
            let mut checks = Vec::new();
            match input {
                InputFile::Theta(f) => validate_theta(f, &mut checks)?,
                InputFile::NonArchimedean(f) => validate_na(ctx, f, "", &mut checks)?,
            }
            Ok(checks)
        }
        Command::Eval { points, .. } => {
            let th = ctx.timed("tropicalize", || tropical(input))?;
            ctx.timed("evaluate", || evaluate_points(&th, points))
        }
        Command::Riemann { points, .. } => {
            let data = match input {
                InputFile::Theta(f) => f.base.data()?,
                InputFile::NonArchimedean(f) => {
                    TropicalPolarizationData::new(f.period()?.exponents().clone(), f.lambda_matrix()?)?
                }
            };
            let th = riemann_theta(&Arc::new(data))?;
            let points = if points.is_empty() { vec![fmt_point(&TropPoint::origin(th.g()).coords)] } else { points.clone() };
            ctx.timed("evaluate", || evaluate_points(&th, &points))
        }
        Command::Crosscheck { suite, .. } => match suite {
            Suite::A => suite_a(ctx, input),
            Suite::B => suite_b(ctx, na_input(input, "B")?),
            Suite::C => suite_c(ctx, na_input(input, "C")?),
        },
        Command::Divisor { .. } => divisor(ctx, input),
        Command::Export { .. } => export(ctx, input),
    }
}

fn na_input<'a>(input: &'a InputFile, suite: &str) -> Result<&'a NaFile, CliError> {
    match input {
        InputFile::NonArchimedean(f) => Ok(f),
        InputFile::Theta(_) => Err(CliError::Usage(format!("suite {suite} needs non-Archimedean input (a \"T\" matrix)"))),
    }
}

/// The tropical theta function described by the input, tropicalizing
/// non-Archimedean data.
fn tropical(input: &InputFile) -> Result<TropicalThetaFunction, CliError> {
    match input {
        InputFile::Theta(f) => Ok(f.theta()?),
        InputFile::NonArchimedean(f) => Ok(f.function()?.tropicalize()?),
    }
}

/// Mathematical failures become failed checks; malformed input stays an error.
fn precondition(name: &str, e: SchemaError) -> Result<Check, CliError> {
    match e {
        SchemaError::Na(_) | SchemaError::Theta(_) | SchemaError::TropAv(_) => {
            Ok(Check::new(name, false, json!({ "error": e.to_string() })))
        }
        other => Err(other.into()),
    }
}

fn validate_theta(f: &ThetaFile, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let (p, lambda) = f.base.matrices()?;
    let report = validate(&p, &lambda)?;
    let valid = report.valid;
    checks.push(Check::new("polarization", valid, serde_json::to_value(&report).expect("report serializes")));
    if valid && f.factor.is_some() {
        checks.push(match f.theta() {
            Ok(th) => Check::new(
                "theta_function",
                true,
                json!({
                    "ample": th.is_ample(),
                    "even": th.is_even(),
                    "representatives": th.profile().entries.len(),
                }),
            ),
            Err(e) => precondition("theta_function", e)?,
        });
    }
    Ok(())
}

fn validate_na(ctx: &Ctx, f: &NaFile, prefix: &str, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let period = f.period()?;
    let lambda = f.lambda_matrix()?;
    let report = validate(period.exponents(), &lambda)?;
    let valid = report.valid;
    checks.push(Check::new(format!("{prefix}polarization"), valid, serde_json::to_value(&report).expect("report serializes")));
    if valid {
        match f.cocycle(&period) {
            Ok(cocycle) => {
                let r = verify_cocycle(&cocycle, &period, ctx.cli.seed);
                let shown: Vec<Value> = r
                    .failures
                    .iter()
                    .take(SHOWN_FAILURES)
                    .map(|x| json!({ "n1": x.n1, "n2": x.n2, "lhs": x.lhs.to_string(), "rhs": x.rhs.to_string() }))
                    .collect();
                checks.push(Check::new(
                    format!("{prefix}cocycle_identity"),
                    r.passed(),
                    json!({ "checked": r.checked, "failed": r.failures.len(), "failures": shown }),
                ));
            }
            Err(e) => checks.push(precondition(&format!("{prefix}cocycle"), e)?),
        }
        match f.function() {
            Ok(th) => {
                let samples = invariance_samples(&th, ctx.cli.samples, ctx.cli.seed);
                let r = verify_invariance(&th, &samples);
                let shown: Vec<Value> = r
                    .failures
                    .iter()
                    .take(SHOWN_FAILURES)
                    .map(|x| {
                        json!({ "mprime": x.mprime, "u": x.u, "expected": x.expected.to_string(), "found": x.found.to_string() })
                    })
                    .collect();
                checks.push(Check::new(
                    format!("{prefix}invariance"),
                    r.passed(),
                    json!({ "checked": r.checked, "failed": r.failures.len(), "failures": shown }),
                ));
            }
            Err(e) => checks.push(precondition(&format!("{prefix}theta_function"), e)?),
        }
    }
    if let Some(pair) = &f.pair {
        validate_na(ctx, &pair.numerator, &format!("{prefix}numerator."), checks)?;
        validate_na(ctx, &pair.denominator, &format!("{prefix}denominator."), checks)?;
    }
    Ok(())
}

fn parse_points(points: &[String], g: usize) -> Result<Vec<TropPoint>, CliError> {
    points
        .iter()
        .map(|s| match parse_point(s) {
            Ok(c) if c.len() == g => Ok(TropPoint::new(c)),
            _ => Err(CliError::Point(s.clone())),
        })
        .collect()
}

fn evaluate_points(th: &TropicalThetaFunction, points: &[String]) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for v in parse_points(points, th.g())? {
        let at = th.evaluate(&v)?;
        let key = fmt_point(&v.coords);
        checks.push(Check::new(
            format!("f({key})"),
            true,
            json!({ "point": key, "value": fmt_rational(&at.value), "witnesses": at.witnesses }),
        ));
    }
    Ok(checks)
}

fn suite_a(ctx: &mut Ctx, input: &InputFile) -> Result<Vec<Check>, CliError> {
    let th = ctx.timed("tropicalize", || tropical(input))?;
    let g = th.g();
    let mut rng = sampling::rng(ctx.cli.seed);
    let mut pairs = Vec::new();
    for _ in 0..ctx.cli.samples {
        let v = sampling::point(&mut rng, g);
        for _ in 0..SHIFTS_PER_POINT {
            pairs.push((v.clone(), sampling::shift(&mut rng, g)));
        }
    }
    let r = ctx.timed("transformation_law", || th.verify_transformation(&pairs))?;
    let shown: Vec<Value> = r
        .failures
        .iter()
        .take(SHOWN_FAILURES)
        .map(|x| {
            json!({
                "point": fmt_point(&x.point.coords),
                "shift": x.shift,
                "lhs": fmt_rational(&x.lhs),
                "rhs": fmt_rational(&x.rhs),
            })
        })
        .collect();
    Ok(vec![Check::new(
        "transformation_law",
        r.passed(),
        json!({
            "points": ctx.cli.samples,
            "shifts_per_point": SHIFTS_PER_POINT,
            "checked": r.checked,
            "failed": r.failures.len(),
            "failures": shown,
        }),
    )])
}

fn suite_b(ctx: &mut Ctx, f: &NaFile) -> Result<Vec<Check>, CliError> {
    let period = f.period()?;
    let lambda = f.lambda_matrix()?;
    let na = match build_riemann_theta(&period, &lambda) {
        Ok(na) => na,
        Err(e) => return Ok(vec![Check::new("precondition", false, json!({ "error": e.to_string() }))]),
    };
    let trop = ctx.timed("tropicalize", || na.tropicalize())?;
    let data = TropicalPolarizationData::new(period.exponents().clone(), lambda)?;
    let reference = riemann_theta(&Arc::new(data))?;
    let mut rng = sampling::rng(ctx.cli.seed);
    let mut equal = 0;
    let mut failures = Vec::new();
    let start = Instant::now();
    for _ in 0..ctx.cli.samples {
        let v = sampling::point(&mut rng, trop.g());
        let (a, b) = (trop.value(&v)?, reference.value(&v)?);
        if a == b {
            equal += 1;
        } else {
            failures.push(json!({ "point": fmt_point(&v.coords), "tropicalized": fmt_rational(&a), "riemann": fmt_rational(&b) }));
        }
    }
    ctx.timings.insert("compare".into(), start.elapsed().as_secs_f64() * 1e3);
    let passed = failures.is_empty();
    failures.truncate(SHOWN_FAILURES);
    Ok(vec![Check::new(
        "riemann_agreement",
        passed,
        json!({
            "points": ctx.cli.samples,
            "equal": equal,
            "additive_constant": if passed { Value::from("0/1") } else { Value::Null },
            "failures": failures,
        }),
    )])
}

fn suite_c(ctx: &mut Ctx, f: &NaFile) -> Result<Vec<Check>, CliError> {
    let (f1, f2) = match &f.pair {
        Some(pair) => (pair.numerator.function()?, pair.denominator.function()?),
        None => {
            let period = f.period()?;
            let cocycle = f.cocycle(&period)?;
            let mut basis = theta_basis(&period, &cocycle)?;
            if basis.len() < 2 {
                let msg = "the theta basis has a single element; give a numerator/denominator pair";
                return Ok(vec![Check::new("precondition", false, json!({ "error": msg }))]);
            }
            let second = basis.swap_remove(1);
            (basis.swap_remove(0), second)
        }
    };
    let (h, h_trop) = match construct_rational_function(&f1, &f2) {
        Ok(x) => x,
        Err(e) => return Ok(vec![Check::new("precondition", false, json!({ "error": e.to_string() }))]),
    };
    let g = h_trop.g();
    let mut rng = sampling::rng(ctx.cli.seed);

    let start = Instant::now();
    let mut periodic_failures = Vec::new();
    for _ in 0..ctx.cli.samples {
        let v = sampling::point(&mut rng, g);
        let n = sampling::shift(&mut rng, g);
        let (a, b) = (h_trop.evaluate(&v)?, h_trop.evaluate(&v.add(&h_trop.embed_period(&n)))?);
        if a != b {
            periodic_failures.push(json!({ "point": fmt_point(&v.coords), "shift": n, "value": fmt_rational(&a), "shifted": fmt_rational(&b) }));
        }
    }
    ctx.timings.insert("periodicity".into(), start.elapsed().as_secs_f64() * 1e3);
    let periodic = periodic_failures.is_empty();
    let failed = periodic_failures.len();
    periodic_failures.truncate(SHOWN_FAILURES);

    let start = Instant::now();
    let (t1, t2) = (f1.tropicalize()?, f2.tropicalize()?);
    let mut found = 0;
    let mut tried = 0;
    let mut mismatches = Vec::new();
    while found < QUOTIENT_POINTS && tried < 20 * QUOTIENT_POINTS {
        tried += 1;
        let v = sampling::point(&mut rng, g);
        let x: Vec<PuiseuxNumber> = v.coords.iter().map(|e| PuiseuxNumber::q_pow(e.clone())).collect();
        let cutoff = t1.value(&v)?.max(t2.value(&v)?);
        let q = h.quotient_valuation(&x, &cutoff)?;
        if q.numerator != Dominance::Unique || q.denominator != Dominance::Unique {
            continue;
        }
        found += 1;
        let expected = h_trop.evaluate(&v)?;
        if q.val != ExtRational::Finite(expected.clone()) {
            mismatches.push(json!({ "point": fmt_point(&v.coords), "valuation": q.val.to_string(), "h_trop": fmt_rational(&expected) }));
        }
    }
    ctx.timings.insert("quotient".into(), start.elapsed().as_secs_f64() * 1e3);
    let quotient_ok = found == QUOTIENT_POINTS && mismatches.is_empty();
    Ok(vec![
        Check::new(
            "periodicity",
            periodic,
            json!({ "pairs": ctx.cli.samples, "failed": failed, "failures": periodic_failures }),
        ),
        Check::new(
            "quotient_valuation",
            quotient_ok,
            json!({ "points": found, "tried": tried, "wanted": QUOTIENT_POINTS, "mismatches": mismatches }),
        ),
    ])
}

fn divisor(ctx: &mut Ctx, input: &InputFile) -> Result<Vec<Check>, CliError> {
    let format: MeshFormat = ctx.cli.format.parse()?;
    let out = ctx.cli.out.clone().ok_or_else(|| CliError::Usage("divisor needs --out <path>".into()))?;
    let th = ctx.timed("tropicalize", || tropical(input))?;
    let complex = ctx.timed("corner_locus", || corner_locus(&th))?;
    let mesh = ctx.timed("export", || export_mesh(&complex, format))?;
    write(&out, &mesh)?;
    Ok(vec![Check::new(
        "corner_locus",
        true,
        json!({
            "cells": complex.cells.len(),
            "corner_points": complex.corner_points().len(),
            "faces_per_dimension": complex.faces.iter().map(Vec::len).collect::<Vec<_>>(),
            "components": complex.component_count(),
            "betti": complex.betti,
            "euler_characteristic": complex.euler_characteristic,
            "mesh": {
                "path": out.display().to_string(),
                "format": ctx.cli.format,
                "bytes": mesh.len(),
                "sha256": format!("{:x}", Sha256::digest(&mesh)),
            },
        }),
    )])
}

fn export(ctx: &mut Ctx, input: &InputFile) -> Result<Vec<Check>, CliError> {
    if ctx.cli.format.parse::<MeshFormat>()? != MeshFormat::Json {
        return Err(PlError::UnsupportedFormat(format!("export writes json, not {}", ctx.cli.format)).into());
    }
    let th = ctx.timed("tropicalize", || tropical(input))?;
    let file = serde_json::to_value(ThetaFile::from_theta(&th)).expect("theta files serialize");
    let detail = match &ctx.cli.out {
        Some(out) => {
            let mut bytes = serde_json::to_vec_pretty(&file).expect("json values serialize");
            bytes.push(b'\n');
            write(out, &bytes)?;
            json!({ "path": out.display().to_string(), "sha256": format!("{:x}", Sha256::digest(&bytes)) })
        }
        None => json!({ "theta": file }),
    };
    Ok(vec![Check::new("export", true, detail)])
}
