//! Sensing quantities derived from notch frequencies.
//!
//! A single notch gives the frequency detection resolution (FDR, shift per
//! unit permittivity) and its normalised sensitivity. The differential
//! quantities use the spacing `f_d − f_u` of the two notches instead, which
//! is immune to any shift common to both (temperature, humidity). Power-law
//! calibration curves fitted to the differential FDR are inverted to
//! recover an unknown permittivity.

mod fit;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fit::{r_squared, PowerLawFit};

#[derive(Debug, Error, PartialEq)]
pub enum SensingError {
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("permittivity difference is zero (eps = {0})")]
    ZeroPermittivityStep(f64),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("fit is rank deficient: all abscissae are equal")]
    RankDeficient,
    #[error("power-law fit did not converge")]
    NoConvergence,
    #[error(
        "d_p = {d_p:.6e} Hz is outside the calibrated range; nearest bound eps = {nearest_bound}"
    )]
    OutOfCalibration { d_p: f64, nearest_bound: f64 },
}

impl SensingError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        SensingError::Invalid {
            field,
            reason: reason.into(),
        }
    }
}

fn require_positive(field: &'static str, v: f64) -> Result<(), SensingError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(SensingError::invalid(
            field,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

/// Measured notch pair for one material.
#[derive(Debug, Clone, PartialEq)]
pub struct NotchPairObservation {
    /// Lower notch (Hz).
    pub f_u: f64,
    /// Upper notch (Hz).
    pub f_d: f64,
    pub label: String,
    /// Known relative permittivity, when the observation is a calibration point.
    pub eps_ref: Option<f64>,
    /// Acquisition time (s), for drift series.
    pub timestamp: Option<f64>,
}

impl NotchPairObservation {
    pub fn new(f_u: f64, f_d: f64) -> Result<Self, SensingError> {
        let obs = NotchPairObservation {
            f_u,
            f_d,
            label: String::new(),
            eps_ref: None,
            timestamp: None,
        };
        obs.validate()?;
        Ok(obs)
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps_ref = Some(eps);
        self
    }

    pub fn at(mut self, t: f64) -> Self {
        self.timestamp = Some(t);
        self
    }

    pub fn validate(&self) -> Result<(), SensingError> {
        require_positive("f_u", self.f_u)?;
        if !(self.f_d.is_finite() && self.f_d > self.f_u) {
            return Err(SensingError::invalid(
                "f_d",
                format!(
                    "upper notch {} Hz must exceed lower notch {} Hz",
                    self.f_d, self.f_u
                ),
            ));
        }
        Ok(())
    }

    /// Same observation with a common-mode shift `kappa` (Hz) on both notches.
    pub fn shifted(&self, kappa: f64) -> Self {
        NotchPairObservation {
            f_u: self.f_u + kappa,
            f_d: self.f_d + kappa,
            ..self.clone()
        }
    }
}

/// Notch pair of the unloaded sensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BareReference {
    pub f_bu: f64,
    pub f_bd: f64,
    /// Relative permittivity of the bare state (1 for air).
    pub eps_b: f64,
}

impl BareReference {
    pub fn new(f_bu: f64, f_bd: f64, eps_b: f64) -> Result<Self, SensingError> {
        let r = BareReference { f_bu, f_bd, eps_b };
        r.validate()?;
        Ok(r)
    }

    pub fn air(f_bu: f64, f_bd: f64) -> Result<Self, SensingError> {
        Self::new(f_bu, f_bd, 1.0)
    }

    pub fn validate(&self) -> Result<(), SensingError> {
        require_positive("f_bu", self.f_bu)?;
        if !(self.f_bd.is_finite() && self.f_bd > self.f_bu) {
            return Err(SensingError::invalid(
                "f_bd",
                format!(
                    "upper notch {} Hz must exceed lower notch {} Hz",
                    self.f_bd, self.f_bu
                ),
            ));
        }
        if !(self.eps_b.is_finite() && self.eps_b >= 1.0) {
            return Err(SensingError::invalid(
                "eps_b",
                format!("must be >= 1, got {}", self.eps_b),
            ));
        }
        Ok(())
    }

    /// Notch spacing `Δf_B` (Hz).
    pub fn delta_f_b(&self) -> f64 {
        self.f_bd - self.f_bu
    }
}

/// Common-mode shift applied to both notches of an observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftScenario {
    /// Shift (Hz).
    pub kappa: f64,
}

impl DriftScenario {
    pub fn apply(&self, obs: &NotchPairObservation) -> Result<NotchPairObservation, SensingError> {
        if !self.kappa.is_finite() {
            return Err(SensingError::invalid("kappa", "must be finite"));
        }
        Ok(obs.shifted(self.kappa))
    }
}

/// Quantity a calibration curve maps permittivity to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// Differential FDR, Hz per permittivity unit.
    FdrP,
    /// Differential sensitivity, percent.
    SensitivityP,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::FdrP => "fdr_p",
            CurveKind::SensitivityP => "sensitivity_p",
        })
    }
}

/// Fitted power law `y = a·ε^b` with the permittivity range it was fitted on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationCurve {
    pub a: f64,
    pub b: f64,
    pub r2: f64,
    /// `[ε_min, ε_max]` of the calibration data.
    pub domain: [f64; 2],
    pub kind: CurveKind,
}

impl CalibrationCurve {
    pub fn validate(&self) -> Result<(), SensingError> {
        require_positive("a", self.a)?;
        if !self.b.is_finite() {
            return Err(SensingError::invalid("b", "must be finite"));
        }
        if self.kind == CurveKind::FdrP && self.b >= 0.0 {
            return Err(SensingError::invalid(
                "b",
                format!("FDR curves must decrease (b < 0), got {}", self.b),
            ));
        }
        if !(self.r2.is_finite() && self.r2 <= 1.0 + 1e-12) {
            return Err(SensingError::invalid(
                "r2",
                format!("must be <= 1, got {}", self.r2),
            ));
        }
        let [lo, hi] = self.domain;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
            return Err(SensingError::invalid(
                "domain",
                format!("need 0 < min < max, got [{lo}, {hi}]"),
            ));
        }
        Ok(())
    }

    pub fn eval(&self, eps: f64) -> f64 {
        self.a * eps.powf(self.b)
    }

    /// Forward differential value `d_p = a·ε^b·(ε − ε_b)` of an FDR curve.
    pub fn differential_at(&self, eps: f64, eps_b: f64) -> f64 {
        self.eval(eps) * (eps - eps_b)
    }
}

/// Frequency detection resolution between two states: `(f_b − f_m)/(ε_m − ε_b)`.
/// Positive when the notch moves down as permittivity rises.
pub fn fdr_point(f_b: f64, f_m: f64, eps_b: f64, eps_m: f64) -> Result<f64, SensingError> {
    let de = eps_m - eps_b;
    if de == 0.0 {
        return Err(SensingError::ZeroPermittivityStep(eps_m));
    }
    Ok((f_b - f_m) / de)
}

/// Closed-form FDR of the single-constant model, `1/(2π·ε·√(θε))`.
///
/// This is twice the true slope of `f = 1/(2π√(θε))`; see
/// [`frequency_slope`] for the derivative itself.
pub fn fdr_closed_form(theta: f64, eps_m: f64) -> Result<f64, SensingError> {
    require_positive("theta", theta)?;
    require_positive("eps_m", eps_m)?;
    Ok(1.0 / (2.0 * PI * eps_m * (theta * eps_m).sqrt()))
}

/// `|∂f/∂ε| = 1/(4π·ε·√(θε))` of the single-constant model.
pub fn frequency_slope(theta: f64, eps_m: f64) -> Result<f64, SensingError> {
    Ok(0.5 * fdr_closed_form(theta, eps_m)?)
}

/// Sensitivity in percent: `100·fdr/f_b`.
pub fn normalized_sensitivity(fdr: f64, f_b: f64) -> Result<f64, SensingError> {
    require_positive("f_b", f_b)?;
    Ok(100.0 * fdr / f_b)
}

/// Notch spacing `f_d − f_u`, unaffected by common-mode drift.
pub fn differential_value(obs: &NotchPairObservation) -> f64 {
    obs.f_d - obs.f_u
}

/// Differential shift `d_p` and its per-unit resolution `FDR_p` (both Hz).
pub fn differential_fdr(
    obs: &NotchPairObservation,
    bare: &BareReference,
    eps_m: f64,
) -> Result<(f64, f64), SensingError> {
    let de = (bare.eps_b - eps_m).abs();
    if de == 0.0 || !de.is_finite() {
        return Err(SensingError::ZeroPermittivityStep(eps_m));
    }
    let d_p = (differential_value(obs) - bare.delta_f_b()).abs();
    Ok((d_p, d_p / de))
}

/// Differential sensitivity in percent: `100·FDR_p/Δf_B`.
pub fn proposed_sensitivity(fdr_p: f64, delta_f_b: f64) -> Result<f64, SensingError> {
    require_positive("delta_f_b", delta_f_b)?;
    Ok(100.0 * fdr_p / delta_f_b)
}

/// Fits `y = a·ε^b` to `(ε, y)` points and records the fitted domain.
pub fn fit_power_law(
    points: &[(f64, f64)],
    kind: CurveKind,
) -> Result<CalibrationCurve, SensingError> {
    let PowerLawFit { a, b, r2 } = fit::fit_power_law(points)?;
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(CalibrationCurve {
        a,
        b,
        r2,
        domain: [lo, hi],
        kind,
    })
}

/// Relative tolerance on `ε` for the bisection.
pub const INVERSION_TOLERANCE: f64 = 1e-9;
const INVERSION_MAX_ITER: usize = 200;
/// Relative slack on `d_p` accepted beyond the domain ends; values in the
/// slack clamp to the bound and are flagged.
const EDGE_SLACK: f64 = 1e-5;

/// Permittivity recovered from a differential shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub eps: f64,
    /// Set when the solution sits on a calibration domain bound.
    pub at_domain_edge: bool,
}

/// Solves `d_p = a·ε^b·(ε − ε_b)` for `ε` on the curve's calibrated domain.
///
/// Never extrapolates: a `d_p` outside the curve's range on the domain is
/// reported with the nearest domain bound.
pub fn invert_permittivity(
    d_p: f64,
    curve: &CalibrationCurve,
    eps_b: f64,
) -> Result<Inversion, SensingError> {
    curve.validate()?;
    if curve.kind != CurveKind::FdrP {
        return Err(SensingError::invalid(
            "curve",
            format!("inversion needs an fdr_p curve, got {}", curve.kind),
        ));
    }
    if !(d_p.is_finite() && d_p >= 0.0) {
        return Err(SensingError::invalid(
            "d_p",
            format!("must be finite and >= 0, got {d_p}"),
        ));
    }
    if !(eps_b.is_finite() && eps_b >= 1.0) {
        return Err(SensingError::invalid(
            "eps_b",
            format!("must be >= 1, got {eps_b}"),
        ));
    }
    if d_p == 0.0 {
        return Ok(Inversion {
            eps: eps_b,
            at_domain_edge: false,
        });
    }

    let [lo_bound, hi_bound] = curve.domain;
    let lo = lo_bound.max(eps_b);
    if lo >= hi_bound {
        return Err(SensingError::OutOfCalibration {
            d_p,
            nearest_bound: hi_bound,
        });
    }
    let g = |eps: f64| curve.differential_at(eps, eps_b) - d_p;
    let (g_lo, g_hi) = (g(lo), g(hi_bound));
    if g_lo == 0.0 {
        return Ok(Inversion {
            eps: lo,
            at_domain_edge: true,
        });
    }
    if g_hi == 0.0 {
        return Ok(Inversion {
            eps: hi_bound,
            at_domain_edge: true,
        });
    }
    if g_lo.signum() == g_hi.signum() {
        let (bound, miss) = if g_lo.abs() <= g_hi.abs() {
            (lo, g_lo)
        } else {
            (hi_bound, g_hi)
        };
        if miss.abs() <= EDGE_SLACK * d_p {
            return Ok(Inversion {
                eps: bound,
                at_domain_edge: true,
            });
        }
        return Err(SensingError::OutOfCalibration {
            d_p,
            nearest_bound: bound,
        });
    }

    let (mut a, mut b, mut ga) = (lo, hi_bound, g_lo);
    for _ in 0..INVERSION_MAX_ITER {
        let mid = 0.5 * (a + b);
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(Inversion {
                eps: mid,
                at_domain_edge: false,
            });
        }
        if gm.signum() == ga.signum() {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
        if b - a <= INVERSION_TOLERANCE * mid {
            break;
        }
    }
    Ok(Inversion {
        eps: 0.5 * (a + b),
        at_domain_edge: false,
    })
}

/// Per-observation differential values of a time series and their spread.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftReport {
    /// `(timestamp, f_d − f_u)` in input order.
    pub diffs: Vec<(Option<f64>, f64)>,
    /// Largest minus smallest differential value (Hz): what drift left behind.
    pub diff_spread: f64,
    /// Range of the notch-pair midpoint (Hz): the common-mode drift removed.
    pub common_mode_range: f64,
}

impl DriftReport {
    /// Whether the residual is within `rel` of the mean spacing.
    pub fn is_cancelled(&self, rel: f64) -> bool {
        let mean = self.diffs.iter().map(|d| d.1.abs()).sum::<f64>() / self.diffs.len() as f64;
        self.diff_spread <= rel * mean
    }
}

fn range(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    hi - lo
}

pub fn drift_cancellation_report(
    series: &[NotchPairObservation],
) -> Result<DriftReport, SensingError> {
    if series.len() < 2 {
        return Err(SensingError::TooFewPoints {
            needed: 2,
            got: series.len(),
        });
    }
    for obs in series {
        obs.validate()?;
    }
    let diffs: Vec<_> = series
        .iter()
        .map(|o| (o.timestamp, differential_value(o)))
        .collect();
    Ok(DriftReport {
        diff_spread: range(diffs.iter().map(|d| d.1)),
        common_mode_range: range(series.iter().map(|o| 0.5 * (o.f_u + o.f_d))),
        diffs,
    })
}
