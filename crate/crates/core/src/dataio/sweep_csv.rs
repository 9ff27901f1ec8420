//! Fixed six-column sweep CSV. `s21_db` is derived and ignored on read;
//! a zero transmission writes the −200 dB floor.

use num_complex::Complex64;

use super::DataError;
use crate::network_sim::FrequencySweep;
use crate::units::mag_to_db;

pub const SWEEP_CSV_HEADER: [&str; 6] =
    ["freq_hz", "s21_re", "s21_im", "s21_db", "s11_re", "s11_im"];

/// Reference impedance assumed for sweeps read back from CSV (Ω).
const CSV_Z0: f64 = 50.0;

pub fn write_sweep_csv(sweep: &FrequencySweep) -> Result<String, DataError> {
    sweep.validate()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_CSV_HEADER)?;
    for i in 0..sweep.len() {
        let (s21, s11) = (sweep.s21[i], sweep.s11[i]);
        w.write_record([
            sweep.grid[i].to_string(),
            s21.re.to_string(),
            s21.im.to_string(),
            mag_to_db(s21.norm()).to_string(),
            s11.re.to_string(),
            s11.im.to_string(),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| DataError::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| DataError::Format(e.to_string()))
}

pub fn read_sweep_csv(text: &str) -> Result<FrequencySweep, DataError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = r.headers()?;
    if header.iter().map(str::trim).ne(SWEEP_CSV_HEADER) {
        return Err(DataError::Format(format!(
            "expected header {}, found {}",
            SWEEP_CSV_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let (mut grid, mut s21, mut s11) = (Vec::new(), Vec::new(), Vec::new());
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let v: Vec<f64> = rec
            .iter()
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| DataError::Parse {
                line,
                reason: format!("malformed number: {e}"),
            })?;
        grid.push(v[0]);
        s21.push(Complex64::new(v[1], v[2]));
        s11.push(Complex64::new(v[4], v[5]));
    }
    Ok(FrequencySweep::new(grid, s11, s21, CSV_Z0)?)
}
