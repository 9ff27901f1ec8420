use approx::assert_relative_eq;
use proptest::prelude::*;

use super::*;
use crate::presets;
use crate::units::{FF, GHZ, MM2, NH, PF, PH};

fn stack(eps_m: f64, w_ms_mm: f64) -> StackSpec {
    StackSpec {
        eps_s: 3.55,
        h_s: 0.508 * MM,
        h_m: 2.0 * MM,
        eps_m,
        w_ms: w_ms_mm * MM,
    }
}

#[test]
fn effective_permittivity_collapses_for_matched_media() {
    for w in [0.1, 0.85, 1.5, 40.0] {
        let e = effective_permittivity_relative(&stack(3.55, w)).unwrap();
        assert_relative_eq!(e, 3.55, max_relative = 1e-15);
    }
    let abs = effective_permittivity(&stack(3.55, 1.5)).unwrap();
    assert_relative_eq!(abs, 3.55 * EPSILON_0, max_relative = 1e-15);
}

#[test]
fn effective_permittivity_thin_substrate_limit() {
    let mut s = stack(80.0, 1.5);
    s.h_s = 1e-9 * MM;
    let e = effective_permittivity_relative(&s).unwrap();
    assert_relative_eq!(e, 3.55, max_relative = 1e-6);
}

#[test]
fn effective_permittivity_water_on_feed_width() {
    let e = effective_permittivity_relative(&stack(80.0, 1.5)).unwrap();
    assert!((e - 24.79).abs() < 0.01, "{e}");
}

#[test]
fn effective_permittivity_bounds_and_monotone() {
    let mut prev = 0.0;
    for i in 0..200 {
        let eps_m = 3.6 + i as f64 * 0.5;
        let s = stack(eps_m, 0.85);
        let e = effective_permittivity_relative(&s).unwrap();
        assert!(e > prev);
        assert!(e >= 3.55 && e <= 0.5 * (3.55 + eps_m));
        prev = e;
    }
}

#[test]
fn stack_rejects_bad_values() {
    assert!(effective_permittivity(&stack(0.5, 1.0)).is_err());
    let mut s = stack(2.0, 1.0);
    s.w_ms = 0.0;
    assert!(effective_permittivity(&s).is_err());
    s = stack(2.0, 1.0);
    s.h_s = 3.0 * MM;
    assert!(s.outside_thin_substrate_regime());
    assert!(!stack(2.0, 1.0).outside_thin_substrate_regime());
}

#[test]
fn arm_inductance_table_cells() {
    let up = eh_ml_inductance(3.0 * MM, 0.508 * MM, 0.2 * MM).unwrap();
    assert!((up / NH - 1.613).abs() < 1e-3, "{}", up / NH);
    let down = eh_ml_inductance(2.1 * MM, 0.508 * MM, 0.14 * MM).unwrap();
    assert!((down / NH - 1.024).abs() < 1e-3, "{}", down / NH);
}

#[test]
fn arm_inductance_rejects_log_boundary() {
    let err = eh_ml_inductance(0.354 * MM, 0.508 * MM, 0.2 * MM).unwrap_err();
    assert!(matches!(err, CircuitError::Geometry { field: "V", .. }));
}

#[test]
fn spiral_inductance_table_cells() {
    let up = spiral_inductance(1.7 * MM, 1.3 * MM, 2, 0.508 * MM).unwrap();
    assert!((up / NH - 21.87).abs() < 0.01, "{}", up / NH);
    let down = spiral_inductance(1.19 * MM, 0.91 * MM, 2, 0.508 * MM).unwrap();
    assert!((down / NH - 10.72).abs() < 0.01, "{}", down / NH);
    assert!(spiral_inductance(1.0, 1.0, 0, 1.0).is_err());
}

#[test]
fn slot_modulus_of_up_cell_is_one_third() {
    let g = slot_modulus(&presets::cell_up());
    assert_relative_eq!(g, 1.0 / 3.0, max_relative = 1e-15);
}

#[test]
fn elliptic_ratio_is_one_at_self_complementary_modulus() {
    let r = elliptic_ratio(std::f64::consts::FRAC_1_SQRT_2).unwrap();
    assert_relative_eq!(r, 1.0, max_relative = 1e-14);
    for g in [0.1f64, 0.3, 0.6, 0.9] {
        let c = ((1.0 - g) * (1.0 + g)).sqrt();
        let prod = elliptic_ratio(g).unwrap() * elliptic_ratio(c).unwrap();
        assert_relative_eq!(prod, 1.0, max_relative = 1e-14);
    }
}

#[test]
fn spiral_capacitance_golden_up_cell_loaded() {
    // Straight-line evaluation with 30-digit quadrature for K, stack with
    // eps_m = 80 and w_ms = (T + W_Fd)/2 = 0.85 mm.
    let geom = presets::cell_up();
    let eps_eff = effective_permittivity(&stack(80.0, 0.85)).unwrap();
    let c = spiral_capacitance(&geom, eps_eff).unwrap();
    assert_relative_eq!(c, 8.169_319_548_175_929e-14, max_relative = 1e-9);
}

#[test]
fn spiral_capacitance_rejects_tight_spiral() {
    let mut geom = presets::cell_up();
    geom.x = 0.5 * MM;
    let err = spiral_capacitance(&geom, EPSILON_0).unwrap_err();
    assert!(matches!(err, CircuitError::Geometry { field: "X", .. }));
}

#[test]
fn coupling_capacitance_examples() {
    assert_eq!(coupling_capacitance(0.0, 0.3 * MM, EPSILON_0).unwrap(), 0.0);
    let c = coupling_capacitance(0.6 * MM2, 0.3 * MM, 24.79 * EPSILON_0).unwrap();
    assert!((c / PF - 0.439).abs() < 1e-3, "{}", c / PF);
    let c2 = coupling_capacitance(0.6 * MM2, 0.6 * MM, 24.79 * EPSILON_0).unwrap();
    assert_relative_eq!(c2, 0.5 * c, max_relative = 1e-15);
    assert!(matches!(
        coupling_capacitance(0.6 * MM2, 0.0, EPSILON_0),
        Err(CircuitError::Geometry { field: "G", .. })
    ));
}

#[test]
fn compose_examples() {
    let cell = compose_cell(1.0 * NH, 2.0 * PF, 1.0 * NH, 2.0 * PF, 0.1 * NH).unwrap();
    assert_relative_eq!(cell.c_s, 1.0 * PF, max_relative = 1e-15);
    let cell = compose_cell(21.87 * NH, 1.0 * PF, 1.613 * NH, 1.0 * PF, 1.0 * NH).unwrap();
    assert!((cell.l_s / NH - 22.68).abs() < 0.01);
    let cell = compose_cell(1.0 * NH, 2.0 * PF, 1.0 * NH, 1e6, 1.0 * NH).unwrap();
    assert_relative_eq!(cell.c_s, 2.0 * PF, max_relative = 1e-12);
    assert!(compose_cell(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
}

#[test]
fn resonance_of_fitted_tanks() {
    let f = resonance_frequency(9.15 * PH, 19.77 * PF).unwrap();
    assert!((f / GHZ - 11.83).abs() < 0.02, "{}", f / GHZ);
    let f = resonance_frequency(52.3 * PH, 47.55 * PF).unwrap();
    assert!((f / GHZ - 3.19).abs() < 0.02, "{}", f / GHZ);
    let base = resonance_frequency(1.0 * NH, 1.0 * PF).unwrap();
    let quad = resonance_frequency(4.0 * NH, 1.0 * PF).unwrap();
    assert_relative_eq!(quad, 0.5 * base, max_relative = 1e-15);
}

#[test]
fn line_tank_closed_form() {
    let cell = LumpedCell {
        l_sp: 1.0 * NH,
        c_sp: 2.0 * PF,
        l_l: 0.0,
        c_l: 2.0 * PF,
        m: 0.1 * NH,
        l_s: 1.0 * NH,
        c_s: 1.0 * PF,
    };
    let w0 = 2.0 * std::f64::consts::PI * cell.resonance();
    let tank = to_line_tank(&cell, w0).unwrap();
    assert_relative_eq!(tank.l_i, 10.0 * PH, max_relative = 1e-12);
    assert_relative_eq!(tank.c_i, 100.0 * PF, max_relative = 1e-12);

    let doubled = to_line_tank(
        &LumpedCell {
            m: 0.2 * NH,
            ..cell
        },
        w0,
    )
    .unwrap();
    assert_relative_eq!(doubled.l_i, 4.0 * tank.l_i, max_relative = 1e-12);
    assert_relative_eq!(doubled.c_i, 0.25 * tank.c_i, max_relative = 1e-12);
    assert_relative_eq!(doubled.resonance(), tank.resonance(), max_relative = 1e-12);

    assert_eq!(
        to_line_tank(&LumpedCell { m: 0.0, ..cell }, w0),
        Err(CircuitError::Uncoupled)
    );
}

#[test]
fn theta_from_bare_notch() {
    let theta = theta_from_frequency(11.82 * GHZ, 1.0).unwrap();
    assert!((theta - 1.813e-22).abs() < 1e-25, "{theta}");
    assert_relative_eq!(
        permittivity_resonance(theta, 1.0),
        11.82 * GHZ,
        max_relative = 1e-12
    );
    assert_relative_eq!(
        permittivity_resonance(2.0 * theta, 7.0),
        permittivity_resonance(theta, 7.0) / 2f64.sqrt(),
        max_relative = 1e-12
    );
}

#[test]
fn theta_matches_bare_cell_resonance() {
    let geom = presets::cell_up();
    let s = stack(1.0, 0.85);
    let design = synthesize(
        &geom,
        &s,
        &SynthesisOptions::with_mutual(MutualInductance::MatchTankInductance(9.15 * PH)),
    )
    .unwrap();
    let theta = design.theta(1.0).unwrap();
    assert_relative_eq!(
        permittivity_resonance(theta, 1.0),
        design.resonance(),
        max_relative = 1e-12
    );
}

#[test]
fn synthesized_tank_honours_inductance_target() {
    let s = stack(1.0, 0.85);
    let design = synthesize(
        &presets::cell_up(),
        &s,
        &SynthesisOptions::with_mutual(MutualInductance::MatchTankInductance(9.15 * PH)),
    )
    .unwrap();
    assert_relative_eq!(design.tank.l_i, 9.15 * PH, max_relative = 1e-12);
    assert_relative_eq!(
        design.tank.resonance(),
        design.resonance(),
        max_relative = 1e-12
    );
    assert!(!design.a_avg_overridden);
    assert_relative_eq!(design.a_avg, 0.6 * MM2, max_relative = 1e-12);
    // the arm lifts the resonance above the spiral-only value
    let spiral_only = resonance_frequency(design.cell.l_s, design.cell.c_sp).unwrap();
    assert!(design.resonance() > spiral_only);
    assert!(design.cell.c_s / FF < design.cell.c_sp / FF);
}

#[test]
fn synthesis_reports_failing_field() {
    let mut geom = presets::cell_up();
    geom.v = 0.3 * MM;
    let err = synthesize(
        &geom,
        &stack(1.0, 0.85),
        &SynthesisOptions::with_mutual(MutualInductance::Explicit(1.0 * NH)),
    )
    .unwrap_err();
    assert!(matches!(err, CircuitError::Geometry { field: "V", .. }));
}

proptest! {
    #[test]
    fn composition_lowers_capacitance(
        l_sp in 1e-12f64..1e-6, c_sp in 1e-15f64..1e-9,
        l_l in 1e-12f64..1e-6, c_l in 1e-15f64..1e-9, m in 1e-12f64..1e-6,
    ) {
        let cell = compose_cell(l_sp, c_sp, l_l, c_l, m).unwrap();
        prop_assert!(cell.c_s < c_sp.min(c_l));
        prop_assert!(cell.l_s > l_sp);
        let (l_s, c_s) = (l_sp + l_l / 2.0, 1.0 / (1.0 / c_sp + 1.0 / c_l));
        prop_assert!(((cell.l_s - l_s) / l_s).abs() < 1e-15);
        prop_assert!(((cell.c_s - c_s) / c_s).abs() < 1e-14);
        // series arm raises the resonance at fixed inductance
        let with_arm = resonance_frequency(cell.l_s, cell.c_s).unwrap();
        let without = resonance_frequency(cell.l_s, c_sp).unwrap();
        prop_assert!(with_arm > without);
    }

    #[test]
    fn tank_transform_preserves_resonance(
        l_s in 1e-12f64..1e-6, c_s in 1e-15f64..1e-9,
        m in 1e-13f64..1e-6, w0 in 1e6f64..1e12,
    ) {
        let cell = LumpedCell { l_sp: l_s, c_sp: c_s, l_l: l_s, c_l: c_s, m, l_s, c_s };
        let tank = to_line_tank(&cell, w0).unwrap();
        let rel = (tank.resonance() - cell.resonance()).abs() / cell.resonance();
        prop_assert!(rel < 1e-12);
    }

    #[test]
    fn element_formulas_scale_homogeneously(s in 0.1f64..10.0, area in 1e-8f64..1e-5) {
        let base = spiral_inductance(1.7 * MM, 1.3 * MM, 2, 0.508 * MM).unwrap();
        let scaled = spiral_inductance(1.7 * MM * s, 1.3 * MM, 2, 0.508 * MM).unwrap();
        prop_assert!((scaled / base - s).abs() < 1e-12 * s);
        let c = coupling_capacitance(area, 0.3 * MM, EPSILON_0).unwrap();
        let cs = coupling_capacitance(area * s, 0.3 * MM, EPSILON_0).unwrap();
        prop_assert!((cs / c - s).abs() < 1e-12 * s);
        let eps = EPSILON_0 * s;
        let csp = spiral_capacitance(&presets::cell_up(), eps).unwrap();
        let csp1 = spiral_capacitance(&presets::cell_up(), EPSILON_0).unwrap();
        prop_assert!((csp / csp1 - s).abs() < 1e-12 * s);
    }
}
