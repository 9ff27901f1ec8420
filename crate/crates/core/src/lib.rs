//! Modeling and measurement processing for differential spiral-resonator
//! permittivity sensors.
//!
//! The crate is split along the processing chain:
//!
//! * [`circuit_params`] turns cell geometry and the dielectric stack into the
//!   lumped equivalent circuit and its line-coupled tank form.
//! * [`network_sim`] cascades the resonator-loaded line as ABCD two-ports,
//!   produces S-parameter sweeps and extracts notch metrics.
//! * [`sensing`] converts notch frequencies into FDR, sensitivity, the
//!   drift-cancelling differential value, power-law calibration curves and
//!   inverted permittivity.
//! * [`dataio`] reads and writes Touchstone files, sweep CSVs, sensor
//!   configuration and calibration records.
//!
//! All stored quantities are SI (H, F, Hz, m, Ω). Millimetres, nanohenries,
//! picofarads and gigahertz only appear at file and command-line boundaries;
//! see [`units`].

pub mod circuit_params;
pub mod dataio;
pub mod network_sim;
pub mod presets;
pub mod sensing;
pub mod units;

pub use circuit_params::{CellGeometry, CircuitError, LineTank, LumpedCell, StackSpec};
pub use dataio::{DataError, SensorConfig};
pub use network_sim::{ArrayLayout, FrequencySweep, NotchMetrics, SimError};
pub use sensing::{BareReference, CalibrationCurve, CurveKind, NotchPairObservation, SensingError};

pub use num_complex::Complex64;
