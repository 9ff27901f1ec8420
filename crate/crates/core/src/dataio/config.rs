//! TOML sensor configuration. Lengths in mm, areas in mm², frequencies in
//! GHz, line elements in nH/pF; everything is converted to SI on load.
//! Omitted sections fall back to the reference sensor; a cell section that
//! is present must give every dimension.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::DataError;
use crate::circuit_params::{CellGeometry, MutualInductance, StackSpec, SynthesisOptions};
use crate::network_sim::{linear_grid, ArrayLayout};
use crate::presets;
use crate::units::{GHZ, MM, MM2, NH, PF};

/// The bundled reference configuration.
pub const DEFAULT_CONFIG: &str = include_str!("../../config/default.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCell {
    x: f64,
    y: f64,
    t: f64,
    a: f64,
    b: f64,
    v: f64,
    turns: u32,
    g: f64,
}

impl RawCell {
    fn to_geometry(&self) -> CellGeometry {
        CellGeometry::from_mm(
            self.x, self.y, self.t, self.a, self.b, self.v, self.turns, self.g,
        )
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawStack {
    eps_s: f64,
    h_s: f64,
    h_m: f64,
    eps_m: f64,
    w_fd: f64,
    l_fd: f64,
}

impl Default for RawStack {
    fn default() -> Self {
        RawStack {
            eps_s: presets::SUBSTRATE_EPS,
            h_s: presets::SUBSTRATE_THICKNESS / MM,
            h_m: presets::MUT_THICKNESS / MM,
            eps_m: 1.0,
            w_fd: presets::FEED_WIDTH / MM,
            l_fd: presets::FEED_LENGTH / MM,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawLayout {
    n_cells: usize,
    d_ctc: f64,
    line_l: f64,
    line_c: f64,
    z0: f64,
}

impl Default for RawLayout {
    fn default() -> Self {
        let bare = presets::bare_circuit();
        RawLayout {
            n_cells: 1,
            d_ctc: presets::BASELINE_DCTC / MM,
            line_l: bare.line_l / NH,
            line_c: bare.line_c / PF,
            z0: 50.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawSweep {
    start: f64,
    stop: f64,
    step: f64,
}

impl Default for RawSweep {
    fn default() -> Self {
        RawSweep {
            start: 0.0,
            stop: 20.0,
            step: 0.01,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOverrides {
    a_avg: Option<f64>,
    w_ms: Option<f64>,
    m: Option<f64>,
    spiral_gap: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    cell_u: Option<RawCell>,
    cell_d: Option<RawCell>,
    #[serde(default)]
    stack: RawStack,
    #[serde(default)]
    layout: RawLayout,
    #[serde(default)]
    sweep: RawSweep,
    #[serde(default)]
    overrides: BTreeMap<String, RawOverrides>,
}

/// Which of the two resonators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    U,
    D,
}

/// Per-cell replacements for the ambiguous quantities (SI).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CellOverrides {
    /// Arm coupling area (m²).
    pub a_avg: Option<f64>,
    /// Microstrip width for the effective permittivity (m).
    pub w_ms: Option<f64>,
    /// Mutual inductance (H).
    pub m: Option<f64>,
    /// Spacing inside the spiral-capacitance factor (m).
    pub spiral_gap: Option<f64>,
}

/// Frequency grid request (Hz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepSpec {
    pub fn grid(&self) -> Vec<f64> {
        // validated on load
        linear_grid(self.start, self.stop, self.step).unwrap_or_default()
    }
}

/// Validated sensor description in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorConfig {
    pub cell_u: CellGeometry,
    pub cell_d: CellGeometry,
    /// Stack with `w_ms` left at the feed width; see [`SensorConfig::stack_for`].
    pub stack: StackSpec,
    /// Feed line width (m).
    pub feed_width: f64,
    /// Feed line length (m).
    pub feed_length: f64,
    pub layout: ArrayLayout,
    pub sweep: SweepSpec,
    pub overrides_u: CellOverrides,
    pub overrides_d: CellOverrides,
}

impl SensorConfig {
    pub fn cell(&self, branch: Branch) -> &CellGeometry {
        match branch {
            Branch::U => &self.cell_u,
            Branch::D => &self.cell_d,
        }
    }

    pub fn overrides(&self, branch: Branch) -> &CellOverrides {
        match branch {
            Branch::U => &self.overrides_u,
            Branch::D => &self.overrides_d,
        }
    }

    /// Default microstrip width for a cell, `(T + W_Fd)/2`.
    pub fn default_w_ms(&self, branch: Branch) -> f64 {
        0.5 * (self.cell(branch).t + self.feed_width)
    }

    /// Stack with the cell's microstrip width applied.
    pub fn stack_for(&self, branch: Branch) -> StackSpec {
        StackSpec {
            w_ms: self
                .overrides(branch)
                .w_ms
                .unwrap_or_else(|| self.default_w_ms(branch)),
            ..self.stack
        }
    }

    /// Synthesis options; without an `m` override the mutual inductance
    /// reproduces the reference unloaded tank inductance.
    pub fn synthesis_options(&self, branch: Branch) -> SynthesisOptions {
        let o = self.overrides(branch);
        let bare = presets::bare_circuit();
        let target = match branch {
            Branch::U => bare.up.l_i,
            Branch::D => bare.down.l_i,
        };
        SynthesisOptions {
            a_avg: o.a_avg,
            spiral_gap: o.spiral_gap,
            mutual: o.m.map_or(
                MutualInductance::MatchTankInductance(target),
                MutualInductance::Explicit,
            ),
        }
    }
}

fn positive(section: &'static str, field: &'static str, v: Option<f64>) -> Result<(), DataError> {
    match v {
        Some(x) if !(x.is_finite() && x > 0.0) => Err(DataError::Config {
            section,
            source: crate::circuit_params::CircuitError::Invalid {
                field,
                reason: format!("must be finite and > 0, got {x}"),
            },
        }),
        _ => Ok(()),
    }
}

fn overrides(
    raw: Option<&RawOverrides>,
    section: &'static str,
) -> Result<CellOverrides, DataError> {
    let Some(r) = raw else {
        return Ok(CellOverrides::default());
    };
    positive(section, "a_avg", r.a_avg)?;
    positive(section, "w_ms", r.w_ms)?;
    positive(section, "m", r.m)?;
    positive(section, "spiral_gap", r.spiral_gap)?;
    Ok(CellOverrides {
        a_avg: r.a_avg.map(|v| v * MM2),
        w_ms: r.w_ms.map(|v| v * MM),
        m: r.m.map(|v| v * NH),
        spiral_gap: r.spiral_gap.map(|v| v * MM),
    })
}

/// Parses and validates a sensor configuration.
pub fn load_config(text: &str) -> Result<SensorConfig, DataError> {
    let raw: RawConfig = toml::from_str(text)
        .map_err(|e| DataError::ConfigSyntax(e.to_string().trim().to_owned()))?;
    if let Some(key) = raw
        .overrides
        .keys()
        .find(|k| !matches!(k.as_str(), "u" | "d"))
    {
        return Err(DataError::ConfigSyntax(format!(
            "unknown override cell {key:?}, expected \"u\" or \"d\""
        )));
    }

    let cell_u = raw
        .cell_u
        .as_ref()
        .map_or_else(presets::cell_up, RawCell::to_geometry);
    let cell_d = raw
        .cell_d
        .as_ref()
        .map_or_else(presets::cell_down, RawCell::to_geometry);
    let s = &raw.stack;
    let stack = StackSpec {
        eps_s: s.eps_s,
        h_s: s.h_s * MM,
        h_m: s.h_m * MM,
        eps_m: s.eps_m,
        w_ms: s.w_fd * MM,
    };
    stack.validate().map_err(|source| DataError::Config {
        section: "stack",
        source,
    })?;
    positive("stack", "l_fd", Some(s.l_fd))?;
    cell_u
        .validate_with(&stack)
        .map_err(|source| DataError::Config {
            section: "cell_u",
            source,
        })?;
    cell_d
        .validate_with(&stack)
        .map_err(|source| DataError::Config {
            section: "cell_d",
            source,
        })?;

    let l = &raw.layout;
    let layout = ArrayLayout {
        n_cells: l.n_cells,
        d_ctc: l.d_ctc * MM,
        line_l: l.line_l * NH,
        line_c: l.line_c * PF,
        z0: l.z0,
    };
    layout.validate().map_err(|source| DataError::ConfigSweep {
        section: "layout",
        source,
    })?;

    let sweep = SweepSpec {
        start: raw.sweep.start * GHZ,
        stop: raw.sweep.stop * GHZ,
        step: raw.sweep.step * GHZ,
    };
    linear_grid(sweep.start, sweep.stop, sweep.step).map_err(|source| DataError::ConfigSweep {
        section: "sweep",
        source,
    })?;

    let config = SensorConfig {
        cell_u,
        cell_d,
        stack,
        feed_width: s.w_fd * MM,
        feed_length: s.l_fd * MM,
        layout,
        sweep,
        overrides_u: overrides(raw.overrides.get("u"), "overrides.u")?,
        overrides_d: overrides(raw.overrides.get("d"), "overrides.d")?,
    };
    for branch in [Branch::U, Branch::D] {
        config
            .stack_for(branch)
            .validate()
            .map_err(|source| DataError::Config {
                section: "stack",
                source,
            })?;
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mm(v: f64) -> f64 {
        v * MM
    }

    #[test]
    fn bundled_config_is_the_reference_sensor() {
        let c = load_config(DEFAULT_CONFIG).unwrap();
        let u = &c.cell_u;
        for (got, want) in [
            (u.x, 1.7),
            (u.y, 1.3),
            (u.t, 0.2),
            (u.a, 0.3),
            (u.b, 0.2),
            (u.v, 3.0),
            (u.g, 0.3),
        ] {
            assert_relative_eq!(got, mm(want), max_relative = 1e-12);
        }
        let d = &c.cell_d;
        for (got, want) in [
            (d.x, 1.19),
            (d.y, 0.91),
            (d.t, 0.14),
            (d.a, 0.21),
            (d.b, 0.14),
            (d.v, 2.1),
            (d.g, 0.3),
        ] {
            assert_relative_eq!(got, mm(want), max_relative = 1e-12);
        }
        assert_eq!((u.turns, d.turns), (2, 2));
        assert_relative_eq!(c.stack.h_s, mm(0.508), max_relative = 1e-12);
        assert_relative_eq!(c.stack.h_m, mm(2.0), max_relative = 1e-12);
        assert_relative_eq!(c.feed_width, mm(1.5), max_relative = 1e-12);
        assert_relative_eq!(c.feed_length, mm(40.0), max_relative = 1e-12);
        assert_eq!(c.stack.eps_s, 3.55);
        assert_eq!(c, load_config("").unwrap());
    }

    #[test]
    fn default_w_ms_is_per_cell() {
        let c = load_config("").unwrap();
        assert_relative_eq!(c.stack_for(Branch::U).w_ms, mm(0.85), max_relative = 1e-12);
        assert_relative_eq!(c.stack_for(Branch::D).w_ms, mm(0.82), max_relative = 1e-12);
        let c = load_config("[overrides.d]\nw_ms = 0.5\n").unwrap();
        assert_relative_eq!(c.stack_for(Branch::D).w_ms, mm(0.5), max_relative = 1e-12);
    }

    #[test]
    fn mutual_default_and_override() {
        let c = load_config("").unwrap();
        assert!(matches!(
            c.synthesis_options(Branch::U).mutual,
            MutualInductance::MatchTankInductance(_)
        ));
        let c = load_config("[overrides.u]\nm = 0.5\n").unwrap();
        assert_eq!(
            c.synthesis_options(Branch::U).mutual,
            MutualInductance::Explicit(0.5 * NH)
        );
        assert!(matches!(
            c.synthesis_options(Branch::D).mutual,
            MutualInductance::MatchTankInductance(_)
        ));
    }

    #[test]
    fn zero_trace_width_names_the_field() {
        let text = DEFAULT_CONFIG.replacen("t = 0.2", "t = 0.0", 1);
        let e = load_config(&text).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("cell_u") && msg.contains('T'), "{msg}");
    }

    #[test]
    fn short_arm_names_v() {
        let text = DEFAULT_CONFIG.replacen("v = 3.0", "v = 0.3", 1);
        let msg = load_config(&text).unwrap_err().to_string();
        assert!(msg.contains("V"), "{msg}");
    }

    #[test]
    fn unknown_and_missing_keys() {
        let msg = load_config("[stack]\neps = 3\n").unwrap_err().to_string();
        assert!(msg.contains("eps"), "{msg}");
        let msg = load_config("[cell_u]\nx = 1.7\n").unwrap_err().to_string();
        assert!(msg.contains("missing field"), "{msg}");
        assert!(load_config("[overrides.q]\nm = 1\n").is_err());
        assert!(load_config("[overrides.u]\nm = -1\n")
            .unwrap_err()
            .to_string()
            .contains('m'));
        assert!(load_config("[sweep]\nstep = 0\n").is_err());
        assert!(load_config("[layout]\nn_cells = 0\n").is_err());
        assert!(load_config("[banana]\n").is_err());
    }
}
