use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "srsense",
    version,
    about = "Differential spiral-resonator permittivity sensor toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Predict the unloaded notch pair from the cell geometry.
    Design(DesignArgs),
    /// Simulate the loaded line and report its notches.
    Simulate(SimulateArgs),
    /// Recover permittivity from a measured two-port file.
    Extract(ExtractArgs),
    /// Fit calibration curves to labelled observations.
    Calibrate(CalibrateArgs),
    /// Check drift cancellation over a time series of notch pairs.
    Differential(DifferentialArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// First sweep frequency (GHz).
    #[arg(long)]
    pub grid_start: Option<f64>,
    /// Last sweep frequency (GHz).
    #[arg(long)]
    pub grid_stop: Option<f64>,
    /// Sweep step (GHz).
    #[arg(long)]
    pub grid_step: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DesignArgs {
    /// Sensor configuration (TOML); the bundled reference sensor if omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// MUT relative permittivity, replacing the config value.
    #[arg(long)]
    pub eps_m: Option<f64>,
    /// Element table (CSV).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `bare`, `mut80`, or `LU,CU,LD,CD` in pH and pF.
    /// Without it the tanks are synthesized from the configuration.
    #[arg(long)]
    pub tanks: Option<String>,
    /// Line section `L,C` in nH and pF at 14 mm spacing.
    #[arg(long)]
    pub line: Option<String>,
    #[arg(long)]
    pub cells: Option<usize>,
    /// Centre-to-centre cell spacing (mm).
    #[arg(long)]
    pub dctc_mm: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Notch depth threshold (dB).
    #[arg(long, default_value_t = srsense::network_sim::DEFAULT_DEPTH_THRESHOLD_DB, allow_hyphen_values = true)]
    pub threshold_db: f64,
    /// Sweep CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Notch table CSV.
    #[arg(long)]
    pub notches: Option<PathBuf>,
    /// Touchstone export of the sweep.
    #[arg(long)]
    pub s2p_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExtractArgs {
    /// Measured two-port file.
    #[arg(long)]
    pub s2p: PathBuf,
    /// Unloaded reference: `f_u,f_d` in GHz, or a two-port file.
    #[arg(long)]
    pub bare: String,
    /// Calibration record holding an `fdr_p` curve.
    #[arg(long)]
    pub calibration: PathBuf,
    /// Relative permittivity of the unloaded state.
    #[arg(long, default_value_t = 1.0)]
    pub eps_b: f64,
    #[arg(long, default_value_t = srsense::network_sim::DEFAULT_DEPTH_THRESHOLD_DB, allow_hyphen_values = true)]
    pub threshold_db: f64,
    /// Result row (CSV).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CalibrateArgs {
    /// Observations CSV: `label,eps_ref,f_u_hz,f_d_hz`.
    #[arg(long)]
    pub observations: PathBuf,
    /// Unloaded reference: `f_u,f_d` in GHz, or a two-port file.
    #[arg(long)]
    pub bare: String,
    #[arg(long, default_value_t = 1.0)]
    pub eps_b: f64,
    #[arg(long, default_value_t = srsense::network_sim::DEFAULT_DEPTH_THRESHOLD_DB, allow_hyphen_values = true)]
    pub threshold_db: f64,
    /// Calibration record (TOML).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DifferentialArgs {
    /// Time series CSV: `timestamp_s,f_u_hz,f_d_hz`.
    #[arg(long)]
    pub observations: PathBuf,
    /// Spread, relative to the mean spacing, still counted as cancelled.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Per-observation differential values (CSV).
    #[arg(long)]
    pub out: Option<PathBuf>,
}
