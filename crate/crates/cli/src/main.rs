use std::process::ExitCode;

use clap::Parser;
use srsense_cli::{run, Cli};

fn main() -> ExitCode {
    let outcome = run(&Cli::parse());
    print!("{}", outcome.report);
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(outcome.status)
}
