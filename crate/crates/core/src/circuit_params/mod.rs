//! Lumped equivalent circuit of one spiral-resonator cell.
//!
//! A cell is a two-turn rectangular spiral (self-inductance `L_SP`, spiral
//! capacitance `C_SP`) extended by a horizontal microstrip arm (inductance
//! `L_L`, coupling capacitance `C_L` to the main line). Spiral and arm are
//! in series, giving the composite `L_S = L_SP + L_L/2` and
//! `1/C_S = 1/C_SP + 1/C_L`. Magnetic coupling `M` to the line turns the
//! series resonator into a parallel tank `(L_i, C_i)` inserted in the line,
//! with the same resonance.
//!
//! Unit conventions for the empirical element formulas:
//!
//! * The arm inductance formula is evaluated with lengths in millimetres and
//!   yields nanohenries.
//! * The spiral-capacitance geometric factor is evaluated with lengths in
//!   millimetres and read as a length in millimetres.
//!
//! Every function here takes and returns SI values; the millimetre
//! evaluation is internal.

mod elliptic;

use std::f64::consts::PI;

use thiserror::Error;

pub use elliptic::elliptic_k;

use crate::units::{EPSILON_0, MM, MU_0, NH};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("geometry error in {field}: {reason}")]
    Geometry { field: &'static str, reason: String },
    #[error("elliptic modulus {0} outside [0, 1)")]
    EllipticDomain(f64),
    #[error("cell is uncoupled from the line (mutual inductance must be > 0)")]
    Uncoupled,
}

fn require_positive(field: &'static str, value: f64) -> Result<(), CircuitError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(CircuitError::Invalid {
            field,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}

/// Physical dimensions of one resonator cell, stored in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    /// Outer spiral length.
    pub x: f64,
    /// Outer spiral width.
    pub y: f64,
    /// Trace width.
    pub t: f64,
    /// Inter-turn spacing. Carried as metadata; no element formula uses it.
    pub a: f64,
    /// Spiral slot width.
    pub b: f64,
    /// Length of the extended horizontal arm.
    pub v: f64,
    pub turns: u32,
    /// Coupling gap to the main line.
    pub g: f64,
}

impl CellGeometry {
    #[allow(clippy::too_many_arguments)]
    pub fn from_mm(x: f64, y: f64, t: f64, a: f64, b: f64, v: f64, turns: u32, g: f64) -> Self {
        Self {
            x: x * MM,
            y: y * MM,
            t: t * MM,
            a: a * MM,
            b: b * MM,
            v: v * MM,
            turns,
            g: g * MM,
        }
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (field, value) in [
            ("X", self.x),
            ("Y", self.y),
            ("T", self.t),
            ("A", self.a),
            ("B", self.b),
            ("V", self.v),
            ("G", self.g),
        ] {
            require_positive(field, value)?;
        }
        if self.turns == 0 {
            return Err(CircuitError::Invalid {
                field: "N",
                reason: "turn count must be >= 1".into(),
            });
        }
        Ok(())
    }

    /// Checks the cell against a stack, including the arm-inductance
    /// requirement `2V > H_S + T`.
    pub fn validate_with(&self, stack: &StackSpec) -> Result<(), CircuitError> {
        self.validate()?;
        stack.validate()?;
        if 2.0 * self.v <= stack.h_s + self.t {
            return Err(CircuitError::Geometry {
                field: "V",
                reason: format!(
                    "2V = {:.4} mm must exceed H_S + T = {:.4} mm",
                    2.0 * self.v / MM,
                    (stack.h_s + self.t) / MM
                ),
            });
        }
        Ok(())
    }
}

/// Substrate and material-under-test stack. Thicknesses and widths in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackSpec {
    pub eps_s: f64,
    pub h_s: f64,
    pub h_m: f64,
    pub eps_m: f64,
    /// Average microstrip width entering the effective-permittivity formula.
    pub w_ms: f64,
}

impl StackSpec {
    pub fn validate(&self) -> Result<(), CircuitError> {
        if !(self.eps_s.is_finite() && self.eps_s >= 1.0) {
            return Err(CircuitError::Invalid {
                field: "eps_s",
                reason: format!("must be >= 1, got {}", self.eps_s),
            });
        }
        if !(self.eps_m.is_finite() && self.eps_m >= 1.0) {
            return Err(CircuitError::Invalid {
                field: "eps_m",
                reason: format!("must be >= 1, got {}", self.eps_m),
            });
        }
        require_positive("h_s", self.h_s)?;
        require_positive("h_m", self.h_m)?;
        require_positive("w_ms", self.w_ms)
    }

    /// True when `H_S/H_M >= 1`, i.e. outside the thin-substrate regime the
    /// effective-permittivity formula assumes.
    pub fn outside_thin_substrate_regime(&self) -> bool {
        self.h_s / self.h_m >= 1.0
    }

    pub fn with_mut_permittivity(self, eps_m: f64) -> Self {
        Self { eps_m, ..self }
    }
}

/// Relative effective permittivity of the microstrip with the MUT on top.
pub fn effective_permittivity_relative(stack: &StackSpec) -> Result<f64, CircuitError> {
    stack.validate()?;
    let mean = 0.5 * (stack.eps_s + stack.eps_m);
    let half_diff = 0.5 * (stack.eps_s - stack.eps_m);
    let fill = (1.0 + 12.0 * stack.h_s / stack.w_ms).sqrt().recip();
    let eps = mean + half_diff * fill;
    if !eps.is_finite() {
        return Err(CircuitError::Invalid {
            field: "stack",
            reason: "effective permittivity is not finite".into(),
        });
    }
    Ok(eps)
}

/// Absolute effective permittivity (F/m).
pub fn effective_permittivity(stack: &StackSpec) -> Result<f64, CircuitError> {
    Ok(EPSILON_0 * effective_permittivity_relative(stack)?)
}

/// Inductance of the extended horizontal arm (H).
///
/// `0.2·V·[ln(2V/(H_S+T)) + 0.5 + 0.22·(H_S+T)/V]` with lengths in mm gives
/// nanohenries.
pub fn eh_ml_inductance(v: f64, h_s: f64, t: f64) -> Result<f64, CircuitError> {
    require_positive("V", v)?;
    require_positive("H_S", h_s)?;
    require_positive("T", t)?;
    let (v, ht) = (v / MM, (h_s + t) / MM);
    let arg = 2.0 * v / ht;
    if arg <= 1.0 {
        return Err(CircuitError::Geometry {
            field: "V",
            reason: format!("2V/(H_S+T) = {arg:.6} must exceed 1"),
        });
    }
    Ok(0.2 * v * (arg.ln() + 0.5 + 0.22 * ht / v) * NH)
}

/// Spiral self-inductance `μ0·N²·X·Y/H_S` (H).
pub fn spiral_inductance(x: f64, y: f64, turns: u32, h_s: f64) -> Result<f64, CircuitError> {
    require_positive("X", x)?;
    require_positive("Y", y)?;
    require_positive("H_S", h_s)?;
    if turns == 0 {
        return Err(CircuitError::Invalid {
            field: "N",
            reason: "turn count must be >= 1".into(),
        });
    }
    let n = f64::from(turns);
    Ok(MU_0 * n * n * x * y / h_s)
}

/// Slot-to-trace modulus `γ = (B/2)/((B/2)+T)`.
pub fn slot_modulus(geom: &CellGeometry) -> f64 {
    let half_slot = 0.5 * geom.b;
    half_slot / (half_slot + geom.t)
}

/// `K(√(1−γ²)) / K(γ)`.
pub fn elliptic_ratio(gamma: f64) -> Result<f64, CircuitError> {
    let complement = ((1.0 - gamma) * (1.0 + gamma)).sqrt();
    Ok(elliptic_k(complement)? / elliptic_k(gamma)?)
}

/// Geometric factor `β2` with `C_SP = β2·ε_eff` (metres), using `gap` for
/// the spacing term of the spiral formula.
pub fn spiral_capacitance_factor(geom: &CellGeometry, gap: f64) -> Result<f64, CircuitError> {
    geom.validate()?;
    require_positive("G", gap)?;
    let gamma = slot_modulus(geom);
    let n = f64::from(geom.turns);
    let (x, b, t, gap) = (geom.x / MM, geom.b / MM, geom.t / MM, gap / MM);
    let span = x - (n - 0.5) * (b + t);
    if span <= 0.0 {
        return Err(CircuitError::Geometry {
            field: "X",
            reason: format!(
                "spiral too tight: X = {x} mm must exceed (N - 1/2)(B + T) = {} mm",
                x - span
            ),
        });
    }
    let q = x / (4.0 * (gap + t) * n * n + 1.0) * span;
    Ok(elliptic_ratio(gamma)? * q * MM)
}

/// Spiral capacitance (F) using the cell's own coupling gap `G`.
pub fn spiral_capacitance(geom: &CellGeometry, eps_eff: f64) -> Result<f64, CircuitError> {
    spiral_capacitance_with_gap(geom, geom.g, eps_eff)
}

pub fn spiral_capacitance_with_gap(
    geom: &CellGeometry,
    gap: f64,
    eps_eff: f64,
) -> Result<f64, CircuitError> {
    require_positive("eps_eff", eps_eff)?;
    Ok(spiral_capacitance_factor(geom, gap)? * eps_eff)
}

/// Arm-to-line coupling capacitance `(A_avg/G)·ε_eff` (F). `a_avg` in m².
pub fn coupling_capacitance(a_avg: f64, g: f64, eps_eff: f64) -> Result<f64, CircuitError> {
    if !(a_avg.is_finite() && a_avg >= 0.0) {
        return Err(CircuitError::Invalid {
            field: "A_AVG",
            reason: format!("must be >= 0, got {a_avg}"),
        });
    }
    if g == 0.0 {
        return Err(CircuitError::Geometry {
            field: "G",
            reason: "zero gap makes the coupling capacitance singular".into(),
        });
    }
    require_positive("G", g)?;
    require_positive("eps_eff", eps_eff)?;
    Ok(a_avg / g * eps_eff)
}

/// Synthesized elements of one cell (SI).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LumpedCell {
    pub l_sp: f64,
    pub c_sp: f64,
    pub l_l: f64,
    pub c_l: f64,
    pub m: f64,
    pub l_s: f64,
    pub c_s: f64,
}

impl LumpedCell {
    pub fn resonance(&self) -> f64 {
        1.0 / (2.0 * PI * (self.l_s * self.c_s).sqrt())
    }
}

/// Spiral and arm in series: `L_S = L_SP + L_L/2`, `C_S = C_SP·C_L/(C_SP+C_L)`.
pub fn compose_cell(
    l_sp: f64,
    c_sp: f64,
    l_l: f64,
    c_l: f64,
    m: f64,
) -> Result<LumpedCell, CircuitError> {
    require_positive("L_SP", l_sp)?;
    require_positive("C_SP", c_sp)?;
    require_positive("L_L", l_l)?;
    require_positive("C_L", c_l)?;
    require_positive("M", m)?;
    Ok(LumpedCell {
        l_sp,
        c_sp,
        l_l,
        c_l,
        m,
        l_s: l_sp + 0.5 * l_l,
        c_s: c_sp * c_l / (c_sp + c_l),
    })
}

/// `1/(2π√(LC))` in Hz.
pub fn resonance_frequency(l: f64, c: f64) -> Result<f64, CircuitError> {
    require_positive("L", l)?;
    require_positive("C", c)?;
    Ok(1.0 / (2.0 * PI * (l * c).sqrt()))
}

/// Parallel tank seen by the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineTank {
    pub l_i: f64,
    pub c_i: f64,
}

impl LineTank {
    pub fn new(l_i: f64, c_i: f64) -> Result<Self, CircuitError> {
        require_positive("L_i", l_i)?;
        require_positive("C_i", c_i)?;
        Ok(Self { l_i, c_i })
    }

    pub fn resonance(&self) -> f64 {
        1.0 / (2.0 * PI * (self.l_i * self.c_i).sqrt())
    }

    pub fn angular_resonance(&self) -> f64 {
        1.0 / (self.l_i * self.c_i).sqrt()
    }
}

/// Coupled-line transform `C_i = L_S/(M²ω0²)`, `L_i = C_S·M²·ω0²`.
///
/// `L_i·C_i = L_S·C_S` for any `ω0`, so the tank resonance is the cell
/// resonance and `M` only sets the tank impedance level.
pub fn to_line_tank(cell: &LumpedCell, omega0: f64) -> Result<LineTank, CircuitError> {
    if cell.m == 0.0 {
        return Err(CircuitError::Uncoupled);
    }
    require_positive("M", cell.m)?;
    require_positive("omega0", omega0)?;
    let k = cell.m * cell.m * omega0 * omega0;
    LineTank::new(cell.c_s * k, cell.l_s / k)
}

/// Mutual inductance that makes the transformed tank inductance equal
/// `target_l_i` at the cell's own resonance: `M = √(target_l_i · L_S)`.
pub fn mutual_for_tank_inductance(l_s: f64, target_l_i: f64) -> Result<f64, CircuitError> {
    require_positive("L_S", l_s)?;
    require_positive("L_i", target_l_i)?;
    Ok((target_l_i * l_s).sqrt())
}

/// `θ = L_S·(β1·β2/(β1+β2))·α1`, so that `L_S·C_S = θ·ε_M` when
/// `C_L = β1·ε_eff`, `C_SP = β2·ε_eff` and `ε_eff = α1·ε_M`.
///
/// `α1` is treated as a constant; the effective-permittivity formula is
/// affine rather than proportional in `ε_M`, so `θ` obtained at one
/// permittivity does not carry over to distant ones.
pub fn theta_coefficient(
    l_s: f64,
    beta1: f64,
    beta2: f64,
    alpha1: f64,
) -> Result<f64, CircuitError> {
    require_positive("L_S", l_s)?;
    require_positive("beta1", beta1)?;
    require_positive("beta2", beta2)?;
    require_positive("alpha1", alpha1)?;
    Ok(l_s * beta1 * beta2 / (beta1 + beta2) * alpha1)
}

/// `θ` recovered from a known notch `f_b` at permittivity `eps_b`.
pub fn theta_from_frequency(f_b: f64, eps_b: f64) -> Result<f64, CircuitError> {
    require_positive("f_b", f_b)?;
    require_positive("eps_b", eps_b)?;
    let w = 2.0 * PI * f_b;
    Ok(1.0 / (w * w * eps_b))
}

/// Single-constant notch model `f = 1/(2π√(θ·ε_M))`.
pub fn permittivity_resonance(theta: f64, eps_m: f64) -> f64 {
    1.0 / (2.0 * PI * (theta * eps_m).sqrt())
}

/// Source of the coupling mutual inductance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MutualInductance {
    /// Fixed value (H).
    Explicit(f64),
    /// Chosen so the line tank has this inductance (H).
    MatchTankInductance(f64),
}

/// Overrides for the quantities the element formulas leave ambiguous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisOptions {
    /// Arm coupling area (m²). Default `V·T`.
    pub a_avg: Option<f64>,
    /// Spacing used inside the spiral-capacitance factor (m). Default `G`.
    pub spiral_gap: Option<f64>,
    pub mutual: MutualInductance,
}

impl SynthesisOptions {
    pub fn with_mutual(mutual: MutualInductance) -> Self {
        Self {
            a_avg: None,
            spiral_gap: None,
            mutual,
        }
    }
}

/// A fully synthesized cell plus the interpretation choices that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellDesign {
    pub cell: LumpedCell,
    pub tank: LineTank,
    pub eps_eff_rel: f64,
    pub a_avg: f64,
    pub a_avg_overridden: bool,
    pub spiral_gap: f64,
    pub spiral_gap_overridden: bool,
    pub w_ms: f64,
    /// Coupling-capacitance factor `β1` (m).
    pub beta1: f64,
    /// Spiral-capacitance factor `β2` (m).
    pub beta2: f64,
}

impl CellDesign {
    pub fn resonance(&self) -> f64 {
        self.cell.resonance()
    }

    /// `θ` for this design with `α1 = ε_eff/ε_M` taken at the design stack.
    pub fn theta(&self, eps_m: f64) -> Result<f64, CircuitError> {
        theta_coefficient(
            self.cell.l_s,
            self.beta1,
            self.beta2,
            EPSILON_0 * self.eps_eff_rel / eps_m,
        )
    }
}

/// Runs the element formulas end to end for one cell.
pub fn synthesize(
    geom: &CellGeometry,
    stack: &StackSpec,
    opts: &SynthesisOptions,
) -> Result<CellDesign, CircuitError> {
    geom.validate_with(stack)?;
    let eps_eff_rel = effective_permittivity_relative(stack)?;
    let eps_eff = EPSILON_0 * eps_eff_rel;

    let a_avg = opts.a_avg.unwrap_or(geom.v * geom.t);
    let spiral_gap = opts.spiral_gap.unwrap_or(geom.g);

    let l_sp = spiral_inductance(geom.x, geom.y, geom.turns, stack.h_s)?;
    let l_l = eh_ml_inductance(geom.v, stack.h_s, geom.t)?;
    let beta1 = coupling_capacitance(a_avg, geom.g, 1.0)?;
    let beta2 = spiral_capacitance_factor(geom, spiral_gap)?;
    if beta1 == 0.0 {
        return Err(CircuitError::Invalid {
            field: "A_AVG",
            reason: "zero coupling area leaves the arm open".into(),
        });
    }
    let c_l = beta1 * eps_eff;
    let c_sp = beta2 * eps_eff;

    let l_s = l_sp + 0.5 * l_l;
    let m = match opts.mutual {
        MutualInductance::Explicit(m) => m,
        MutualInductance::MatchTankInductance(l_i) => mutual_for_tank_inductance(l_s, l_i)?,
    };
    let cell = compose_cell(l_sp, c_sp, l_l, c_l, m)?;
    let omega0 = 2.0 * PI * cell.resonance();
    let tank = to_line_tank(&cell, omega0)?;
    Ok(CellDesign {
        cell,
        tank,
        eps_eff_rel,
        a_avg,
        a_avg_overridden: opts.a_avg.is_some(),
        spiral_gap,
        spiral_gap_overridden: opts.spiral_gap.is_some(),
        w_ms: stack.w_ms,
        beta1,
        beta2,
    })
}

#[cfg(test)]
mod tests;
