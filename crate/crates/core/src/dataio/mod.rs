//! File formats at the edge of the pipeline: Touchstone v1 two-port files
//! from a VNA, the fixed six-column sweep CSV, the TOML sensor
//! configuration and calibration-curve records.

mod calibration;
mod config;
mod sweep_csv;
mod touchstone;

use thiserror::Error;

use crate::circuit_params::CircuitError;
use crate::network_sim::SimError;
use crate::sensing::SensingError;

pub use calibration::{read_calibration, write_calibration, CalibrationRecord};
pub use config::{load_config, Branch, CellOverrides, SensorConfig, SweepSpec, DEFAULT_CONFIG};
pub use sweep_csv::{read_sweep_csv, write_sweep_csv, SWEEP_CSV_HEADER};
pub use touchstone::{
    parse_touchstone, parse_touchstone_document, write_touchstone, DataFormat, FrequencyUnit,
    TouchstoneDocument,
};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("format error: {0}")]
    Format(String),
    #[error("config: {0}")]
    ConfigSyntax(String),
    #[error("config [{section}]: {source}")]
    Config {
        section: &'static str,
        #[source]
        source: CircuitError,
    },
    #[error("config [{section}]: {source}")]
    ConfigSweep {
        section: &'static str,
        #[source]
        source: SimError,
    },
    #[error("calibration record: {0}")]
    Calibration(String),
    #[error("calibration curve {index}: {source}")]
    Curve {
        index: usize,
        #[source]
        source: SensingError,
    },
    #[error(transparent)]
    Sweep(#[from] SimError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl DataError {
    /// Line number for parse errors.
    pub fn line(&self) -> Option<usize> {
        match self {
            DataError::Parse { line, .. } => Some(*line),
            _ => None,
        }
    }
}
