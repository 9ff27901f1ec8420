use approx::assert_relative_eq;
use proptest::prelude::*;

use super::*;
use crate::presets;
use crate::units::{MM, NH, PF, PH};

fn layout(n: usize, s: &presets::CircuitScenario) -> ArrayLayout {
    ArrayLayout::new(n, s.line_l, s.line_c)
}

fn pair(s: &presets::CircuitScenario) -> (LineTank, LineTank) {
    (s.up, s.down)
}

#[test]
fn branch_impedance_limits() {
    let tank = LineTank {
        l_i: 10.0 * PH,
        c_i: 100.0 * PF,
    };
    assert_eq!(
        branch_impedance(&tank, 0.1 * NH, 0.0).unwrap(),
        Complex64::new(0.0, 0.0)
    );
    let z = branch_impedance(&tank, 0.0, 1e3).unwrap();
    assert!(z.norm() < 1e-7);
    let w0 = tank.angular_resonance();
    assert!(branch_impedance(&tank, 0.0, w0).unwrap().norm() >= 1e11);
    assert!(branch_impedance(&tank, 0.0, -1.0).is_err());
}

#[test]
fn branch_impedance_below_resonance() {
    // jωL/(1 − ω²LC) at ω = ω0/2: ω·10 pH / 0.75
    let tank = LineTank {
        l_i: 10.0 * PH,
        c_i: 100.0 * PF,
    };
    let w = 0.5 * tank.angular_resonance();
    let z = branch_impedance(&tank, 0.0, w).unwrap();
    assert!(z.re.abs() < 1e-15);
    assert!((z.im - 0.210_818_5).abs() < 1e-4, "{}", z.im);
}

#[test]
fn bare_table_circuit_has_two_notches() {
    let s = presets::bare_circuit();
    let sweep = simulate_sweep(&[pair(&s)], &layout(1, &s), &default_bare_grid()).unwrap();
    let notches = find_notches(&sweep, DEFAULT_DEPTH_THRESHOLD_DB).unwrap();
    assert_eq!(notches.len(), 2, "{notches:?}");
    let step = 10.0 * MHZ;
    assert!(notches[0].f_notch < notches[1].f_notch);
    assert!((notches[0].f_notch - s.up.resonance()).abs() < step);
    assert!((notches[1].f_notch - s.down.resonance()).abs() < step);
    assert!((notches[0].f_notch / GHZ - 11.82).abs() < 0.02 * 11.82);
    assert!((notches[1].f_notch / GHZ - 17.89).abs() < 0.02 * 17.89);
}

#[test]
fn loaded_table_circuit_notches() {
    let s = presets::loaded_circuit();
    let sweep = simulate_sweep(&[pair(&s)], &layout(3, &s), &default_loaded_grid()).unwrap();
    let (u, d) = dominant_pair(&find_notches(&sweep, DEFAULT_DEPTH_THRESHOLD_DB).unwrap()).unwrap();
    let step = 2.0 * MHZ;
    assert!((u.f_notch - 2.36 * GHZ).abs() < 0.01 * GHZ + step);
    assert!((d.f_notch - 3.20 * GHZ).abs() < 0.02 * GHZ + step);
}

#[test]
fn bare_line_is_transparent() {
    let tiny = LineTank {
        l_i: 1e-18,
        c_i: 1e-18,
    };
    let grid = linear_grid(10.0 * MHZ, 5.0 * GHZ, 10.0 * MHZ).unwrap();
    let lay = ArrayLayout::new(3, 0.2 * NH, 0.02 * PF);
    let sweep = simulate_sweep(&[(tiny, tiny)], &lay, &grid).unwrap();
    assert!(sweep.s21_db().iter().all(|&d| d > -0.5));
    assert!(find_notches(&sweep, -3.0).unwrap().is_empty());
}

#[test]
fn single_tank_notch_at_resonance() {
    let tank = LineTank {
        l_i: 0.1 * NH,
        c_i: 10.0 * PF,
    };
    let through = LineTank {
        l_i: 1e-18,
        c_i: 1e-18,
    };
    let grid = linear_grid(1.0 * GHZ, 9.0 * GHZ, 5.0 * MHZ).unwrap();
    let lay = ArrayLayout::new(1, 0.0, 0.0);
    let sweep = simulate_sweep(&[(tank, through)], &lay, &grid).unwrap();
    let notches = find_notches(&sweep, -10.0).unwrap();
    assert_eq!(notches.len(), 1);
    assert!((notches[0].f_notch - tank.resonance()).abs() < 5.0 * MHZ);
}

#[test]
fn single_tank_bandwidth_closed_form() {
    // Series tank at z0 = 50 Ω: |S21|² = 1/(1 + (X/2z0)²), X = ωL/(1−ω²LC).
    // The band between ±X has width 1/(2π·C·X) exactly.
    //   X3  = 2z0·√(10^0.3 − 1), Q = ω0·C·X3      = 31.547778288952127
    //   X10 = 2z0·√9,            FBW = 100/(2π·C·X10·f0) = 1.0540925533894598 %
    let tank = LineTank {
        l_i: 0.1 * NH,
        c_i: 10.0 * PF,
    };
    let through = LineTank {
        l_i: 1e-18,
        c_i: 1e-18,
    };
    let grid = linear_grid(0.1 * GHZ, 20.0 * GHZ, 0.5 * MHZ).unwrap();
    let sweep = simulate_sweep(&[(tank, through)], &ArrayLayout::new(1, 0.0, 0.0), &grid).unwrap();
    let (fbw, q) = notch_bandwidths(&sweep, tank.resonance()).unwrap();
    assert_relative_eq!(fbw, 1.054_092_553_389_459_8, max_relative = 2e-3);
    assert_relative_eq!(q, 31.547_778_288_952_127, max_relative = 2e-3);
}

#[test]
fn lower_impedance_tank_has_higher_q() {
    let through = LineTank {
        l_i: 1e-18,
        c_i: 1e-18,
    };
    let grid = linear_grid(0.1 * GHZ, 20.0 * GHZ, 0.5 * MHZ).unwrap();
    let lay = ArrayLayout::new(1, 0.0, 0.0);
    let mut prev_q = 0.0;
    // same resonance, decreasing L/C
    for k in [4.0, 2.0, 1.0, 0.5] {
        let tank = LineTank {
            l_i: 0.1 * NH * k,
            c_i: 10.0 * PF / k,
        };
        let sweep = simulate_sweep(&[(tank, through)], &lay, &grid).unwrap();
        let (_, q) = notch_bandwidths(&sweep, tank.resonance()).unwrap();
        assert!(q > prev_q);
        prev_q = q;
    }
}

#[test]
fn band_edge_off_grid_is_reported() {
    let tank = LineTank {
        l_i: 0.1 * NH,
        c_i: 10.0 * PF,
    };
    let through = LineTank {
        l_i: 1e-18,
        c_i: 1e-18,
    };
    let f0 = tank.resonance();
    let grid = linear_grid(f0 - 10.0 * MHZ, f0 + 100.0 * MHZ, 1.0 * MHZ).unwrap();
    let sweep = simulate_sweep(&[(tank, through)], &ArrayLayout::new(1, 0.0, 0.0), &grid).unwrap();
    match notch_bandwidths(&sweep, f0) {
        Err(SimError::UnresolvedBand { .. }) => {}
        other => panic!("expected unresolved band, got {other:?}"),
    }
}

#[test]
fn flat_sweep_has_no_notches() {
    let grid = linear_grid(1.0, 100.0, 1.0).unwrap();
    let n = grid.len();
    let one = Complex64::new(1.0, 0.0);
    let sweep =
        FrequencySweep::new(grid, vec![Complex64::new(0.0, 0.0); n], vec![one; n], 50.0).unwrap();
    assert!(find_notches(&sweep, -3.0).unwrap().is_empty());
    assert!(matches!(
        find_notches(&sweep, 0.0),
        Err(SimError::Threshold(_))
    ));
}

#[test]
fn coarse_grid_is_flagged() {
    let s = presets::bare_circuit();
    let grid = linear_grid(1.0 * GHZ, 20.0 * GHZ, 200.0 * MHZ).unwrap();
    let sweep = simulate_sweep(&[pair(&s)], &layout(1, &s), &grid).unwrap();
    assert_eq!(sweep.unresolved.len(), 2);
    let fine = simulate_sweep(&[pair(&s)], &layout(1, &s), &default_bare_grid()).unwrap();
    assert!(fine.unresolved.is_empty());
}

#[test]
fn layout_and_grid_validation() {
    let s = presets::bare_circuit();
    assert!(simulate_sweep(&[pair(&s)], &layout(0, &s), &default_bare_grid()).is_err());
    assert!(simulate_sweep(&[pair(&s)], &layout(1, &s), &[2.0, 1.0]).is_err());
    assert!(simulate_sweep(&[pair(&s); 2], &layout(3, &s), &[1.0, 2.0]).is_err());
    assert!(linear_grid(5.0, 1.0, 1.0).is_err());
    assert_eq!(linear_grid(0.0, 1.0, 0.25).unwrap().len(), 5);
}

#[test]
fn spacing_scales_line_elements() {
    let mut lay = ArrayLayout::new(3, 0.2 * NH, 0.02 * PF);
    lay.d_ctc = 7.0 * MM;
    let (l, c) = lay.section_line();
    assert_relative_eq!(l, 0.1 * NH, max_relative = 1e-15);
    assert_relative_eq!(c, 0.01 * PF, max_relative = 1e-15);
}

#[test]
fn null_depth_and_bandwidth_grow_with_cells() {
    let s = presets::loaded_circuit();
    let grid = default_loaded_grid();
    let mut prev: Option<(NotchMetrics, NotchMetrics)> = None;
    for n in 2..=5 {
        let sweep = simulate_sweep(&[pair(&s)], &layout(n, &s), &grid).unwrap();
        let cur =
            dominant_pair(&find_notches(&sweep, DEFAULT_DEPTH_THRESHOLD_DB).unwrap()).unwrap();
        if let Some((pu, pd)) = prev {
            assert!(cur.0.null_depth < pu.null_depth && cur.1.null_depth < pd.null_depth);
            assert!(cur.0.fbw_10db.unwrap() > pu.fbw_10db.unwrap());
            assert!(cur.1.fbw_10db.unwrap() > pd.fbw_10db.unwrap());
            assert!((cur.0.f_notch - pu.f_notch).abs() < 2.0 * MHZ);
            assert!((cur.1.f_notch - pd.f_notch).abs() < 2.0 * MHZ);
        }
        prev = Some(cur);
    }
}

#[test]
fn grid_refinement_converges() {
    let s = presets::loaded_circuit();
    let coarse_step = 4.0 * MHZ;
    let coarse = linear_grid(1.0 * GHZ, 4.0 * GHZ, coarse_step).unwrap();
    let fine = linear_grid(1.0 * GHZ, 4.0 * GHZ, coarse_step / 2.0).unwrap();
    let a = simulate_sweep(&[pair(&s)], &layout(3, &s), &coarse).unwrap();
    let b = simulate_sweep(&[pair(&s)], &layout(3, &s), &fine).unwrap();
    let pa = dominant_pair(&find_notches(&a, -15.0).unwrap()).unwrap();
    let pb = dominant_pair(&find_notches(&b, -15.0).unwrap()).unwrap();
    assert!((pa.0.f_notch - pb.0.f_notch).abs() < coarse_step);
    assert!((pa.1.f_notch - pb.1.f_notch).abs() < coarse_step);
}

#[test]
fn notches_placed_on_targets() {
    let s = presets::loaded_circuit();
    let lay = layout(3, &s);
    let grid = linear_grid(1.0 * GHZ, 4.5 * GHZ, 0.5 * MHZ).unwrap();
    let targets = (1.688 * GHZ, 3.6674 * GHZ);
    let (up, down) = place_notches((s.up.l_i, s.down.l_i), targets, &lay, &grid, -15.0).unwrap();
    assert_eq!(up.l_i, s.up.l_i);
    let sweep = simulate_sweep(&[(up, down)], &lay, &grid).unwrap();
    let (u, d) = dominant_pair(&find_notches(&sweep, -15.0).unwrap()).unwrap();
    assert!((u.f_notch / targets.0 - 1.0).abs() < 1e-7);
    assert!((d.f_notch / targets.1 - 1.0).abs() < 1e-7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lossless_and_reciprocal(
        lu in 1e-12f64..1e-9, cu in 1e-12f64..1e-10,
        ld in 1e-12f64..1e-9, cd in 1e-12f64..1e-10,
        n in 1usize..6, dctc_mm in 6.0f64..26.0,
    ) {
        let up = LineTank { l_i: lu, c_i: cu };
        let down = LineTank { l_i: ld, c_i: cd };
        let mut lay = ArrayLayout::new(n, 0.2 * NH, 0.2 * PF);
        lay.d_ctc = dctc_mm * MM;
        let grid = linear_grid(10.0 * MHZ, 20.0 * GHZ, 37.0 * MHZ).unwrap();
        let sweep = simulate_sweep(&[(up, down)], &lay, &grid).unwrap();
        prop_assert!(sweep.passivity_error() < 1e-9);
        prop_assert!(sweep.reciprocity_error.unwrap() < 1e-9);
    }

    #[test]
    fn notch_position_ignores_layout(n in 2usize..6, dctc_mm in 10.0f64..18.0) {
        let s = presets::loaded_circuit();
        let grid = linear_grid(1.5 * GHZ, 4.0 * GHZ, 2.0 * MHZ).unwrap();
        let mut lay = layout(n, &s);
        lay.d_ctc = dctc_mm * MM;
        let sweep = simulate_sweep(&[pair(&s)], &lay, &grid).unwrap();
        let (u, d) = dominant_pair(&find_notches(&sweep, -15.0).unwrap()).unwrap();
        prop_assert!((u.f_notch - s.up.resonance()).abs() < 2.0 * MHZ);
        prop_assert!((d.f_notch - s.down.resonance()).abs() < 2.0 * MHZ);
    }
}
