//! Reference sensor dimensions, fitted circuit values and measured notch
//! frequencies for the two-cell (up/down) spiral sensor on RO4003C.

use crate::circuit_params::{CellGeometry, LineTank};
use crate::units::{GHZ, MM, NH, PF, PH};

pub const SUBSTRATE_EPS: f64 = 3.55;
pub const SUBSTRATE_THICKNESS: f64 = 0.508 * MM;
pub const MUT_THICKNESS: f64 = 2.0 * MM;
pub const FEED_WIDTH: f64 = 1.5 * MM;
pub const FEED_LENGTH: f64 = 40.0 * MM;
pub const COUPLING_GAP: f64 = 0.3 * MM;
pub const TURNS: u32 = 2;
/// Centre-to-centre spacing the per-section line values refer to.
pub const BASELINE_DCTC: f64 = 14.0 * MM;

pub fn cell_up() -> CellGeometry {
    CellGeometry::from_mm(1.7, 1.3, 0.2, 0.3, 0.2, 3.0, TURNS, 0.3)
}

pub fn cell_down() -> CellGeometry {
    CellGeometry::from_mm(1.19, 0.91, 0.14, 0.21, 0.14, 2.1, TURNS, 0.3)
}

/// Tank and line values for one loading state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitScenario {
    pub line_l: f64,
    pub line_c: f64,
    pub up: LineTank,
    pub down: LineTank,
    /// Notch pair reported for the circuit model.
    pub expected: (f64, f64),
}

/// Unloaded (air) circuit values.
pub fn bare_circuit() -> CircuitScenario {
    CircuitScenario {
        line_l: 0.2 * NH,
        line_c: 0.02 * PF,
        up: LineTank {
            l_i: 9.15 * PH,
            c_i: 19.77 * PF,
        },
        down: LineTank {
            l_i: 5.37 * PH,
            c_i: 14.75 * PF,
        },
        expected: (11.82 * GHZ, 17.89 * GHZ),
    }
}

/// Circuit values with a MUT of relative permittivity 80.
pub fn loaded_circuit() -> CircuitScenario {
    CircuitScenario {
        line_l: 0.1 * NH,
        line_c: 0.2 * PF,
        up: LineTank {
            l_i: 101.0 * PH,
            c_i: 45.05 * PF,
        },
        down: LineTank {
            l_i: 52.3 * PH,
            c_i: 47.55 * PF,
        },
        expected: (2.36 * GHZ, 3.20 * GHZ),
    }
}

/// Notch pair predicted by the closed-form element formulas (unloaded).
pub const FORMULA_BARE_PAIR: (f64, f64) = (11.46 * GHZ, 17.55 * GHZ);

/// Measured unloaded notch pair.
pub const MEASURED_BARE: (f64, f64) = (12.09 * GHZ, 17.22 * GHZ);
/// Measured pair with soil (relative permittivity about 5).
pub const MEASURED_SOIL: (f64, f64) = (8.65 * GHZ, 11.25 * GHZ);
/// Measured pair with water at 25 °C (relative permittivity 78.3).
pub const MEASURED_WATER_25C: (f64, f64) = (1.688 * GHZ, 3.445 * GHZ);

/// Permittivities of the calibration materials, soil first.
pub const MUT_PERMITTIVITIES: [f64; 10] =
    [5.0, 16.0, 25.3, 46.5, 55.7, 62.4, 66.8, 71.5, 74.5, 78.3];

/// Power law for the differential FDR (GHz per permittivity unit).
pub const FDR_P_CURVE: (f64, f64) = (3.09, -0.9926);
/// Power law for the differential sensitivity (percent).
pub const SENSITIVITY_P_CURVE: (f64, f64) = (46.62, -0.92);
