//! Batch front end: `design`, `simulate`, `extract`, `calibrate` and
//! `differential`. Each command is a plain function returning a
//! [`CommandOutcome`], so the binary only prints and exits.

mod args;
mod calibrate;
mod design;
mod differential;
mod extract;
mod inputs;
mod simulate;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use srsense::circuit_params::CircuitError;
use srsense::dataio::DataError;
use srsense::network_sim::SimError;
use srsense::sensing::SensingError;
use thiserror::Error;

pub use args::{
    CalibrateArgs, Cli, Command, DesignArgs, DifferentialArgs, ExtractArgs, GridArgs, SimulateArgs,
};
pub use calibrate::cmd_calibrate;
pub use design::cmd_design;
pub use differential::cmd_differential;
pub use extract::cmd_extract;
pub use inputs::{parse_bare_pair, parse_tanks, TankSource};
pub use simulate::cmd_simulate;

/// Exit status for bad input: unreadable files, invalid values, failed
/// preconditions.
pub const EXIT_VALIDATION: u8 = 1;
/// Exit status for failures of the computation itself.
pub const EXIT_COMPUTATION: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Computation(String),
}

impl CliError {
    pub fn status(&self) -> u8 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Computation(_) => EXIT_COMPUTATION,
        }
    }

    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Validation(format!("{}: {e}", path.display()))
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::Invalid { .. } | CircuitError::Geometry { .. } => {
                CliError::Validation(e.to_string())
            }
            CircuitError::EllipticDomain(_) | CircuitError::Uncoupled => {
                CliError::Computation(e.to_string())
            }
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Invalid { .. } | SimError::Threshold(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Computation(e.to_string()),
        }
    }
}

impl From<SensingError> for CliError {
    fn from(e: SensingError) -> Self {
        match e {
            SensingError::Invalid { .. }
            | SensingError::ZeroPermittivityStep(_)
            | SensingError::TooFewPoints { .. } => CliError::Validation(e.to_string()),
            SensingError::RankDeficient
            | SensingError::NoConvergence
            | SensingError::OutOfCalibration { .. } => CliError::Computation(e.to_string()),
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Result of one command.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutcome {
    /// 0 success, 1 validation error, 2 computation error.
    pub status: u8,
    /// Human-readable report for stdout.
    pub report: String,
    /// Non-fatal conditions, one line each, for stderr.
    pub warnings: Vec<String>,
    /// One-line cause when `status != 0`.
    pub error: Option<String>,
    /// Machine-readable files written.
    pub outputs: Vec<PathBuf>,
}

impl CommandOutcome {
    pub(crate) fn failed(e: &CliError) -> Self {
        CommandOutcome {
            status: e.status(),
            error: Some(e.to_string().lines().next().unwrap_or_default().to_owned()),
            ..Default::default()
        }
    }

    pub(crate) fn line(&mut self, args: std::fmt::Arguments<'_>) {
        let _ = self.report.write_fmt(args);
        self.report.push('\n');
    }
}

/// Writes `text` to `path` and records it as an output.
pub(crate) fn write_output(
    outcome: &mut CommandOutcome,
    path: &Path,
    text: &str,
) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    outcome.outputs.push(path.to_owned());
    Ok(())
}

pub(crate) fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> CommandOutcome {
    let result = match &cli.command {
        Command::Design(a) => cmd_design(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Calibrate(a) => cmd_calibrate(a),
        Command::Differential(a) => cmd_differential(a),
    };
    result.unwrap_or_else(|e| CommandOutcome::failed(&e))
}
