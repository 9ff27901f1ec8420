use std::fmt::Write as _;

use srsense::circuit_params::LineTank;
use srsense::dataio::{write_sweep_csv, write_touchstone, DataFormat};
use srsense::network_sim::{
    default_bare_grid, default_loaded_grid, find_notches, linear_grid, simulate_sweep, NotchMetrics,
};
use srsense::presets;
use srsense::units::{GHZ, MM, NH, PF, PH};

use crate::args::{GridArgs, SimulateArgs};
use crate::design::synthesize_pair;
use crate::inputs::{config, parse_line, parse_tanks, TankSource};
use crate::{write_output, CliError, CommandOutcome};

fn grid(flags: &GridArgs, fallback: &[f64]) -> Result<Vec<f64>, CliError> {
    if flags.grid_start.is_none() && flags.grid_stop.is_none() && flags.grid_step.is_none() {
        return Ok(fallback.to_vec());
    }
    let n = fallback.len();
    let start = flags.grid_start.map_or(fallback[0], |v| v * GHZ);
    let stop = flags.grid_stop.map_or(fallback[n - 1], |v| v * GHZ);
    let step = flags.grid_step.map_or(
        if n > 1 {
            fallback[1] - fallback[0]
        } else {
            0.01 * GHZ
        },
        |v| v * GHZ,
    );
    Ok(linear_grid(start, stop, step)?)
}

fn fmt_opt(v: Option<f64>, prec: usize) -> String {
    v.map_or_else(|| "n/a".to_owned(), |x| format!("{x:.prec$}"))
}

const NOTCH_HEADER: &str = "f_notch_hz,null_depth_db,fbw_10db_pct,q_factor";

fn notch_csv(notches: &[NotchMetrics]) -> String {
    let mut s = format!("{NOTCH_HEADER}\n");
    for n in notches {
        let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
        let _ = writeln!(
            s,
            "{},{},{},{}",
            n.f_notch,
            n.null_depth,
            opt(n.fbw_10db),
            opt(n.q_factor)
        );
    }
    s
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<CommandOutcome, CliError> {
    let source = args
        .tanks
        .as_deref()
        .map(parse_tanks)
        .transpose()?
        .unwrap_or(TankSource::Synthesized);
    let cfg = config(args.config.as_deref())?;
    let mut layout = cfg.layout;

    // tanks, and the line/grid that go with them unless a config was given
    let (up, down): (LineTank, LineTank) = match source {
        TankSource::Synthesized => {
            let (u, d) = synthesize_pair(&cfg)?;
            (u.tank, d.tank)
        }
        TankSource::Preset(s) => {
            if args.config.is_none() {
                layout.line_l = s.line_l;
                layout.line_c = s.line_c;
            }
            (s.up, s.down)
        }
        TankSource::Explicit(u, d) => (u, d),
    };
    let fallback = match (source, args.config.is_some()) {
        (TankSource::Preset(s), false) if s == presets::loaded_circuit() => default_loaded_grid(),
        (TankSource::Preset(_), false) => default_bare_grid(),
        _ => cfg.sweep.grid(),
    };
    if let Some(line) = &args.line {
        (layout.line_l, layout.line_c) = parse_line(line)?;
    }
    if let Some(n) = args.cells {
        layout.n_cells = n;
    }
    if let Some(d) = args.dctc_mm {
        layout.d_ctc = d * MM;
    }
    let grid = grid(&args.grid, &fallback)?;

    let sweep = simulate_sweep(&[(up, down)], &layout, &grid)?;
    let notches = find_notches(&sweep, args.threshold_db)?;

    let mut out = CommandOutcome::default();
    out.line(format_args!(
        "tanks U {:.4} pH / {:.4} pF ({:.4} GHz), D {:.4} pH / {:.4} pF ({:.4} GHz)",
        up.l_i / PH,
        up.c_i / PF,
        up.resonance() / GHZ,
        down.l_i / PH,
        down.c_i / PF,
        down.resonance() / GHZ
    ));
    out.line(format_args!(
        "{} cell(s), d_ctc {:.2} mm, line {:.4} nH / {:.4} pF, {} points {:.4}-{:.4} GHz",
        layout.n_cells,
        layout.d_ctc / MM,
        layout.line_l / NH,
        layout.line_c / PF,
        grid.len(),
        grid[0] / GHZ,
        grid[grid.len() - 1] / GHZ
    ));
    out.line(format_args!(
        "notches below {} dB: {}",
        args.threshold_db,
        notches.len()
    ));
    for n in &notches {
        out.line(format_args!(
            "  f = {:.6} GHz  depth = {:.2} dB  FBW10 = {} %  Q = {}",
            n.f_notch / GHZ,
            n.null_depth,
            fmt_opt(n.fbw_10db, 3),
            fmt_opt(n.q_factor, 1)
        ));
    }
    out.line(format_args!(
        "passivity error {:.2e}, reciprocity error {:.2e}",
        sweep.passivity_error(),
        sweep.reciprocity_error.unwrap_or(0.0)
    ));
    for f in &sweep.unresolved {
        out.warnings.push(format!(
            "grid step too coarse to resolve the tank resonance at {:.6} GHz",
            f / GHZ
        ));
    }
    if !sweep.unresolved.is_empty() {
        out.line(format_args!(
            "unresolved: {} tank resonance(s); refine --grid-step",
            sweep.unresolved.len()
        ));
    }

    if let Some(path) = &args.out {
        write_output(&mut out, path, &write_sweep_csv(&sweep)?)?;
    }
    if let Some(path) = &args.notches {
        write_output(&mut out, path, &notch_csv(&notches))?;
    }
    if let Some(path) = &args.s2p_out {
        write_output(
            &mut out,
            path,
            &write_touchstone(&sweep, DataFormat::RealImag)?,
        )?;
    }
    Ok(out)
}
