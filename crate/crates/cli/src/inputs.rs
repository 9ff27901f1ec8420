//! Parsing of command-line values and small input files.

use std::path::Path;

use srsense::circuit_params::LineTank;
use srsense::dataio::{load_config, parse_touchstone, SensorConfig, DEFAULT_CONFIG};
use srsense::network_sim::{dominant_pair, find_notches, FrequencySweep};
use srsense::presets::{self, CircuitScenario};
use srsense::sensing::{BareReference, NotchPairObservation};
use srsense::units::{GHZ, NH, PF, PH};

use crate::{read_input, CliError};

/// Where the simulated tanks come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TankSource {
    /// Synthesized from the configured geometry.
    Synthesized,
    /// A reference scenario, including its line values.
    Preset(CircuitScenario),
    /// Explicit `(up, down)` tanks.
    Explicit(LineTank, LineTank),
}

fn numbers(text: &str, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let bad = || {
        CliError::Validation(format!(
            "{what}: expected {n} comma-separated numbers, got {text:?}"
        ))
    };
    let v: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(bad());
    }
    Ok(v)
}

/// `bare`, `mut80` or `LU,CU,LD,CD` (pH, pF).
pub fn parse_tanks(text: &str) -> Result<TankSource, CliError> {
    match text.trim() {
        "bare" => return Ok(TankSource::Preset(presets::bare_circuit())),
        "mut80" => return Ok(TankSource::Preset(presets::loaded_circuit())),
        _ => {}
    }
    let v = numbers(text, 4, "--tanks")?;
    let up = LineTank::new(v[0] * PH, v[1] * PF)?;
    let down = LineTank::new(v[2] * PH, v[3] * PF)?;
    Ok(TankSource::Explicit(up, down))
}

/// `L,C` in nH and pF.
pub(crate) fn parse_line(text: &str) -> Result<(f64, f64), CliError> {
    let v = numbers(text, 2, "--line")?;
    Ok((v[0] * NH, v[1] * PF))
}

/// Notch pair of a sweep: the two deepest notches, in frequency order.
pub(crate) fn notch_pair(
    sweep: &FrequencySweep,
    threshold_db: f64,
    source: &str,
) -> Result<(f64, f64), CliError> {
    let notches = find_notches(sweep, threshold_db)?;
    let (u, d) = dominant_pair(&notches).ok_or_else(|| {
        CliError::Computation(format!(
            "{source}: found {} notch(es) below {threshold_db} dB, need 2",
            notches.len()
        ))
    })?;
    Ok((u.f_notch, d.f_notch))
}

/// `f_u,f_d` in GHz, or the path of a two-port file to extract them from.
pub fn parse_bare_pair(
    text: &str,
    eps_b: f64,
    threshold_db: f64,
) -> Result<BareReference, CliError> {
    let (f_u, f_d) = if text.contains(',') && !Path::new(text).exists() {
        let v = numbers(text, 2, "--bare")?;
        (v[0] * GHZ, v[1] * GHZ)
    } else {
        let path = Path::new(text);
        let sweep = parse_touchstone(&read_input(path)?)
            .map_err(|e| CliError::Validation(format!("{text}: {e}")))?;
        notch_pair(&sweep, threshold_db, text)?
    };
    Ok(BareReference::new(f_u, f_d, eps_b)?)
}

pub(crate) fn config(path: Option<&Path>) -> Result<SensorConfig, CliError> {
    let text = match path {
        Some(p) => read_input(p)?,
        None => DEFAULT_CONFIG.to_owned(),
    };
    load_config(&text).map_err(|e| match path {
        Some(p) => CliError::Validation(format!("{}: {e}", p.display())),
        None => CliError::from(e),
    })
}

fn column(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize, CliError> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| CliError::Validation(format!("{}: missing column {name}", path.display())))
}

fn field(rec: &csv::StringRecord, i: usize, line: usize, path: &Path) -> Result<f64, CliError> {
    let raw = rec.get(i).unwrap_or("").trim();
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| {
            CliError::Validation(format!(
                "{} line {line}: bad number {raw:?}",
                path.display()
            ))
        })
}

fn records(path: &Path) -> Result<(csv::StringRecord, Vec<csv::StringRecord>), CliError> {
    let text = read_input(path)?;
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let bad = |e: csv::Error| CliError::Validation(format!("{}: {e}", path.display()));
    let headers = r.headers().map_err(bad)?.clone();
    let rows = r.records().collect::<Result<Vec<_>, _>>().map_err(bad)?;
    Ok((headers, rows))
}

/// Calibration observations: `label,eps_ref,f_u_hz,f_d_hz`.
pub(crate) fn labelled_observations(path: &Path) -> Result<Vec<NotchPairObservation>, CliError> {
    let (h, rows) = records(path)?;
    let (il, ie, iu, id) = (
        column(&h, "label", path)?,
        column(&h, "eps_ref", path)?,
        column(&h, "f_u_hz", path)?,
        column(&h, "f_d_hz", path)?,
    );
    rows.iter()
        .enumerate()
        .map(|(k, rec)| {
            let line = k + 2;
            let obs =
                NotchPairObservation::new(field(rec, iu, line, path)?, field(rec, id, line, path)?)
                    .map_err(|e| {
                        CliError::Validation(format!("{} line {line}: {e}", path.display()))
                    })?;
            Ok(obs
                .labeled(rec.get(il).unwrap_or(""))
                .with_eps(field(rec, ie, line, path)?))
        })
        .collect()
}

/// Drift series: `timestamp_s,f_u_hz,f_d_hz`.
pub(crate) fn timed_observations(path: &Path) -> Result<Vec<NotchPairObservation>, CliError> {
    let (h, rows) = records(path)?;
    let (it, iu, id) = (
        column(&h, "timestamp_s", path)?,
        column(&h, "f_u_hz", path)?,
        column(&h, "f_d_hz", path)?,
    );
    rows.iter()
        .enumerate()
        .map(|(k, rec)| {
            let line = k + 2;
            let obs =
                NotchPairObservation::new(field(rec, iu, line, path)?, field(rec, id, line, path)?)
                    .map_err(|e| {
                        CliError::Validation(format!("{} line {line}: {e}", path.display()))
                    })?;
            Ok(obs.at(field(rec, it, line, path)?))
        })
        .collect()
}
