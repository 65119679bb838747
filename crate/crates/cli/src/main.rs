use std::process::ExitCode;

use clap::Parser;
use tropical_theta_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    print!("{}", outcome.render());
    if let Some(e) = &outcome.report.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
