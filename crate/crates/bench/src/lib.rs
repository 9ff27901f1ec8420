//! Inputs shared by the benchmarks.

use srsense::dataio::{write_touchstone, DataFormat};
use srsense::network_sim::{default_loaded_grid, simulate_sweep, ArrayLayout, FrequencySweep};
use srsense::presets::{self, MUT_PERMITTIVITIES};

/// Three-cell loaded array on the 2 MHz, 0–5 GHz grid.
pub fn loaded_array() -> (srsense::LineTank, srsense::LineTank, ArrayLayout, Vec<f64>) {
    let s = presets::loaded_circuit();
    (
        s.up,
        s.down,
        ArrayLayout::new(3, s.line_l, s.line_c),
        default_loaded_grid(),
    )
}

pub fn loaded_sweep() -> FrequencySweep {
    let (u, d, layout, grid) = loaded_array();
    simulate_sweep(&[(u, d)], &layout, &grid).expect("reference scenario simulates")
}

/// Touchstone text of [`loaded_sweep`].
pub fn loaded_touchstone(format: DataFormat) -> String {
    write_touchstone(&loaded_sweep(), format).expect("simulated sweeps carry all four parameters")
}

/// Calibration points on the differential-FDR power law.
pub fn calibration_points() -> Vec<(f64, f64)> {
    let (a, b) = presets::FDR_P_CURVE;
    MUT_PERMITTIVITIES
        .iter()
        .map(|&x| (x, a * 1e9 * x.powf(b) * (1.0 + 0.003 * (x * 7.0).sin())))
        .collect()
}
