use srsense::circuit_params::{synthesize, LineTank};
use srsense::dataio::{
    load_config, parse_touchstone, write_touchstone, Branch, DataFormat, DEFAULT_CONFIG,
};
use srsense::network_sim::{
    dominant_pair, find_notches, linear_grid, place_notches, simulate_sweep, ArrayLayout,
};
use srsense::presets::{self, FDR_P_CURVE, MEASURED_BARE, MUT_PERMITTIVITIES};
use srsense::sensing::{
    differential_fdr, fit_power_law, invert_permittivity, BareReference, CurveKind,
    NotchPairObservation,
};
use srsense::units::{GHZ, MHZ};

#[test]
fn synthesized_tanks_produce_their_own_notches() {
    let cfg = load_config(DEFAULT_CONFIG).unwrap();
    let tank =
        |b: Branch| synthesize(cfg.cell(b), &cfg.stack_for(b), &cfg.synthesis_options(b)).unwrap();
    let (u, d) = (tank(Branch::U), tank(Branch::D));
    assert!(u.resonance() < d.resonance());
    let grid = linear_grid(5.0 * GHZ, 30.0 * GHZ, 5.0 * MHZ).unwrap();
    let sweep = simulate_sweep(&[(u.tank, d.tank)], &cfg.layout, &grid).unwrap();
    let (nu, nd) = dominant_pair(&find_notches(&sweep, -15.0).unwrap()).unwrap();
    assert!((nu.f_notch - u.resonance()).abs() < 2.0 * 5.0 * MHZ);
    assert!((nd.f_notch - d.resonance()).abs() < 2.0 * 5.0 * MHZ);
}

/// Simulated measurements at each calibration permittivity, fitted, then
/// an unseen permittivity recovered through a Touchstone file.
#[test]
fn calibrate_then_extract_through_touchstone() {
    let (a, b) = FDR_P_CURVE;
    let bare = BareReference::air(MEASURED_BARE.0, MEASURED_BARE.1).unwrap();
    let s = presets::loaded_circuit();
    let layout = ArrayLayout::new(3, s.line_l, s.line_c);
    let grid = linear_grid(1.0 * GHZ, 6.0 * GHZ, 1.0 * MHZ).unwrap();

    let measure = |eps: f64| {
        // lower notch placed arbitrarily, spacing from the power law
        let f_u = 1.9 * GHZ;
        let f_d = f_u + bare.delta_f_b() - a * GHZ * eps.powf(b) * (eps - 1.0);
        let (up, down): (LineTank, LineTank) =
            place_notches((s.up.l_i, s.down.l_i), (f_u, f_d), &layout, &grid, -15.0).unwrap();
        let sweep = simulate_sweep(&[(up, down)], &layout, &grid).unwrap();
        let text = write_touchstone(&sweep, DataFormat::DbAngle).unwrap();
        let parsed = parse_touchstone(&text).unwrap();
        let (nu, nd) = dominant_pair(&find_notches(&parsed, -15.0).unwrap()).unwrap();
        NotchPairObservation::new(nu.f_notch, nd.f_notch).unwrap()
    };

    let points: Vec<_> = MUT_PERMITTIVITIES
        .iter()
        .step_by(2)
        .map(|&eps| (eps, differential_fdr(&measure(eps), &bare, eps).unwrap().1))
        .collect();
    let curve = fit_power_law(&points, CurveKind::FdrP).unwrap();
    assert!((curve.b - b).abs() < 1e-3, "{curve:?}");
    assert!(curve.r2 > 0.9999);

    let obs = measure(40.0);
    let (d_p, _) = differential_fdr(&obs, &bare, 40.0).unwrap();
    let eps = invert_permittivity(d_p, &curve, 1.0).unwrap().eps;
    assert!((eps - 40.0).abs() < 0.1, "{eps}");
}
