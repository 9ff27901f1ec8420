//! Touchstone v1 two-port reader and writer.
//!
//! Rows are `f S11 S21 S12 S22`, each parameter a pair in the declared
//! format. Angles are in degrees; a zero magnitude is written in DB format
//! as the −200 dB floor.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::DataError;
use crate::network_sim::{FrequencySweep, ReversePath};
use crate::units::mag_to_db;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FrequencyUnit {
    pub fn scale(self) -> f64 {
        match self {
            FrequencyUnit::Hz => 1.0,
            FrequencyUnit::KHz => 1e3,
            FrequencyUnit::MHz => 1e6,
            FrequencyUnit::GHz => 1e9,
        }
    }

    fn token(self) -> &'static str {
        match self {
            FrequencyUnit::Hz => "Hz",
            FrequencyUnit::KHz => "kHz",
            FrequencyUnit::MHz => "MHz",
            FrequencyUnit::GHz => "GHz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    RealImag,
    MagAngle,
    DbAngle,
}

impl DataFormat {
    fn token(self) -> &'static str {
        match self {
            DataFormat::RealImag => "RI",
            DataFormat::MagAngle => "MA",
            DataFormat::DbAngle => "DB",
        }
    }

    fn decode(self, p: f64, q: f64) -> Complex64 {
        match self {
            DataFormat::RealImag => Complex64::new(p, q),
            DataFormat::MagAngle => Complex64::from_polar(p, q.to_radians()),
            DataFormat::DbAngle => Complex64::from_polar(10f64.powf(p / 20.0), q.to_radians()),
        }
    }

    fn encode(self, z: Complex64) -> (f64, f64) {
        match self {
            DataFormat::RealImag => (z.re, z.im),
            DataFormat::MagAngle => (z.norm(), z.arg().to_degrees()),
            DataFormat::DbAngle => (mag_to_db(z.norm()), z.arg().to_degrees()),
        }
    }
}

/// Parsed file content, values as written.
#[derive(Debug, Clone, PartialEq)]
pub struct TouchstoneDocument {
    pub frequency_unit: FrequencyUnit,
    pub format: DataFormat,
    /// Reference resistance (Ω).
    pub reference_resistance: f64,
    /// `freq, S11 pair, S21 pair, S12 pair, S22 pair`.
    pub rows: Vec<[f64; 9]>,
}

impl TouchstoneDocument {
    pub fn to_sweep(&self) -> Result<FrequencySweep, DataError> {
        let scale = self.frequency_unit.scale();
        let n = self.rows.len();
        let (mut grid, mut s11, mut s21, mut s12, mut s22) = (
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        );
        for r in &self.rows {
            grid.push(r[0] * scale);
            s11.push(self.format.decode(r[1], r[2]));
            s21.push(self.format.decode(r[3], r[4]));
            s12.push(self.format.decode(r[5], r[6]));
            s22.push(self.format.decode(r[7], r[8]));
        }
        let mut sweep = FrequencySweep::new(grid, s11, s21, self.reference_resistance)?;
        sweep.reverse = Some(ReversePath { s12, s22 });
        Ok(sweep)
    }
}

fn parse_options(
    tokens: &[&str],
    line: usize,
) -> Result<(FrequencyUnit, DataFormat, f64), DataError> {
    let err = |reason: String| DataError::Parse { line, reason };
    let (mut unit, mut format, mut r) = (FrequencyUnit::GHz, DataFormat::MagAngle, 50.0_f64);
    let mut i = 0;
    while i < tokens.len() {
        match tokens[i].to_ascii_uppercase().as_str() {
            "HZ" => unit = FrequencyUnit::Hz,
            "KHZ" => unit = FrequencyUnit::KHz,
            "MHZ" => unit = FrequencyUnit::MHz,
            "GHZ" => unit = FrequencyUnit::GHz,
            "S" => {}
            p @ ("Y" | "Z" | "H" | "G") => {
                return Err(err(format!(
                    "parameter type {p} is not supported, expected S"
                )))
            }
            "RI" => format = DataFormat::RealImag,
            "MA" => format = DataFormat::MagAngle,
            "DB" => format = DataFormat::DbAngle,
            "R" => {
                i += 1;
                let v = tokens
                    .get(i)
                    .ok_or_else(|| err("option R needs a value".into()))?;
                r = v
                    .parse()
                    .map_err(|_| err(format!("bad reference resistance {v:?}")))?;
                if !(r.is_finite() && r > 0.0) {
                    return Err(err(format!("reference resistance must be > 0, got {r}")));
                }
            }
            other => return Err(err(format!("unknown option {other:?}"))),
        }
        i += 1;
    }
    Ok((unit, format, r))
}

/// Parses Touchstone v1 two-port text into its document form.
pub fn parse_touchstone_document(text: &str) -> Result<TouchstoneDocument, DataError> {
    let mut options = None;
    let mut rows: Vec<[f64; 9]> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            return Err(DataError::Parse {
                line,
                reason: format!(
                    "Touchstone v2 keyword {content:?} is not supported (v1 two-port only)"
                ),
            });
        }
        if let Some(rest) = content.strip_prefix('#') {
            // only the first option line counts
            if options.is_none() {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                options = Some(parse_options(&tokens, line)?);
            }
            continue;
        }
        if options.is_none() {
            return Err(DataError::Parse {
                line,
                reason: "data before the option line".into(),
            });
        }
        let values: Vec<f64> = content
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| DataError::Parse {
                line,
                reason: format!("malformed number: {e}"),
            })?;
        let row: [f64; 9] = values.as_slice().try_into().map_err(|_| DataError::Parse {
            line,
            reason: format!(
                "expected 9 columns for a two-port row, found {}",
                values.len()
            ),
        })?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(DataError::Parse {
                line,
                reason: "non-finite value".into(),
            });
        }
        if let Some(prev) = rows.last() {
            if row[0] <= prev[0] {
                return Err(DataError::Parse {
                    line,
                    reason: format!(
                        "frequency {} does not increase (previous {})",
                        row[0], prev[0]
                    ),
                });
            }
        }
        if row[0] < 0.0 {
            return Err(DataError::Parse {
                line,
                reason: "negative frequency".into(),
            });
        }
        rows.push(row);
    }
    let (frequency_unit, format, reference_resistance) =
        options.ok_or_else(|| DataError::Parse {
            line: text.lines().count().max(1),
            reason: "missing option line".into(),
        })?;
    if rows.is_empty() {
        return Err(DataError::Parse {
            line: text.lines().count().max(1),
            reason: "no data rows".into(),
        });
    }
    Ok(TouchstoneDocument {
        frequency_unit,
        format,
        reference_resistance,
        rows,
    })
}

/// Parses Touchstone v1 two-port text into a sweep with frequencies in Hz.
pub fn parse_touchstone(text: &str) -> Result<FrequencySweep, DataError> {
    parse_touchstone_document(text)?.to_sweep()
}

/// Writes a two-port sweep as Touchstone v1 with frequencies in Hz.
pub fn write_touchstone(sweep: &FrequencySweep, format: DataFormat) -> Result<String, DataError> {
    sweep.validate()?;
    let rev = sweep.reverse.as_ref().ok_or_else(|| {
        DataError::Format("sweep has no S12/S22 data; a two-port file needs all four".into())
    })?;
    let mut out = String::new();
    let _ = writeln!(out, "! two-port S-parameters, {} points", sweep.len());
    let _ = writeln!(
        out,
        "# {} S {} R {}",
        FrequencyUnit::Hz.token(),
        format.token(),
        sweep.z0
    );
    for i in 0..sweep.len() {
        let _ = write!(out, "{}", sweep.grid[i]);
        for z in [sweep.s11[i], sweep.s21[i], rev.s12[i], rev.s22[i]] {
            let (p, q) = format.encode(z);
            let _ = write!(out, " {p} {q}");
        }
        out.push('\n');
    }
    Ok(out)
}
