//! Unit constants and boundary conversions.

/// Vacuum permittivity (F/m), CODATA 2018.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Vacuum permeability (H/m), CODATA 2018.
pub const MU_0: f64 = 1.256_637_062_12e-6;

pub const MM: f64 = 1e-3;
pub const MM2: f64 = 1e-6;
pub const NH: f64 = 1e-9;
pub const PH: f64 = 1e-12;
pub const PF: f64 = 1e-12;
pub const FF: f64 = 1e-15;
pub const GHZ: f64 = 1e9;
pub const MHZ: f64 = 1e6;

/// Floor applied when converting magnitudes to dB.
pub const DB_FLOOR: f64 = -200.0;

/// `20·log10(mag)` clamped to [`DB_FLOOR`].
pub fn mag_to_db(mag: f64) -> f64 {
    if mag <= 0.0 || !mag.is_finite() {
        return DB_FLOOR;
    }
    (20.0 * mag.log10()).max(DB_FLOOR)
}
