//! `troptheta`: validation, evaluation, theorem cross-checks and divisor
//! export for tropical theta functions.
//!
//! Every command produces a single [`RunReport`]. Exit codes: `0` when all
//! checks pass, `1` when a mathematical check fails, `2` on input or usage
//! errors.

mod commands;
mod report;
mod sampling;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use report::{Check, RunReport, Status};

#[derive(Parser, Debug, Clone)]
#[command(name = "troptheta", version, about = "Exact tropical theta functions from the command line")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every sampled grid.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of sample points for checks.
    #[arg(long, global = true, default_value_t = 50)]
    pub samples: usize,
    /// Output format for `divisor` (json, svg, obj) and `export` (json).
    #[arg(long, global = true, default_value = "json")]
    pub format: String,
    /// Where `divisor` and `export` write their file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Add wall-clock timings to the report (which then varies run to run).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check a polarization, theta or non-Archimedean input file.
    Validate { path: PathBuf },
    /// Evaluate the (tropicalized) theta function at points like `1/2,-3`.
    Eval {
        path: PathBuf,
        #[arg(required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Evaluate the Riemann theta function of the file's polarization.
    Riemann {
        path: PathBuf,
        #[arg(allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Run a cross-check suite against non-Archimedean data.
    Crosscheck {
        #[arg(value_enum)]
        suite: Suite,
        path: PathBuf,
    },
    /// Extract the corner locus and write it as a mesh.
    Divisor { path: PathBuf },
    /// Write the tropical theta function as a theta JSON file.
    Export { path: PathBuf },
}

/// A: transformation law of the tropicalization. B: non-Archimedean versus
/// tropical Riemann theta. C: quotient of two theta functions.
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "C", alias = "c")]
    C,
}

pub struct Outcome {
    pub report: RunReport,
    pub exit_code: i32,
}

impl Outcome {
    /// The report as pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let report = commands::dispatch(cli);
    let exit_code = report.exit_code();
    Outcome { report, exit_code }
}
