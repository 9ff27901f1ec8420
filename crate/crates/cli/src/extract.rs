use srsense::dataio::{parse_touchstone, read_calibration};
use srsense::sensing::{
    differential_fdr, differential_value, invert_permittivity, proposed_sensitivity, CurveKind,
    NotchPairObservation,
};
use srsense::units::{GHZ, MHZ};

use crate::args::ExtractArgs;
use crate::inputs::{notch_pair, parse_bare_pair};
use crate::{read_input, write_output, CliError, CommandOutcome};

pub fn cmd_extract(args: &ExtractArgs) -> Result<CommandOutcome, CliError> {
    let name = args.s2p.display().to_string();
    let sweep = parse_touchstone(&read_input(&args.s2p)?)
        .map_err(|e| CliError::Validation(format!("{name}: {e}")))?;
    let bare = parse_bare_pair(&args.bare, args.eps_b, args.threshold_db)?;
    let record = read_calibration(&read_input(&args.calibration)?)
        .map_err(|e| CliError::Validation(format!("{}: {e}", args.calibration.display())))?;
    let curve = record.curve(CurveKind::FdrP).ok_or_else(|| {
        CliError::Validation(format!("{}: no fdr_p curve", args.calibration.display()))
    })?;

    let (f_u, f_d) = notch_pair(&sweep, args.threshold_db, &name)?;
    let obs = NotchPairObservation::new(f_u, f_d)?;
    let diff = differential_value(&obs);
    let d_p = (diff - bare.delta_f_b()).abs();
    let inv = invert_permittivity(d_p, curve, bare.eps_b)?;

    let mut out = CommandOutcome::default();
    out.line(format_args!(
        "notches f_U = {:.6} GHz  f_D = {:.6} GHz  DIFF = {:.6} GHz",
        f_u / GHZ,
        f_d / GHZ,
        diff / GHZ
    ));
    out.line(format_args!(
        "bare f_BU = {:.6} GHz  f_BD = {:.6} GHz  delta_f_B = {:.6} GHz  eps_b = {}",
        bare.f_bu / GHZ,
        bare.f_bd / GHZ,
        bare.delta_f_b() / GHZ,
        bare.eps_b
    ));
    out.line(format_args!("D_p = {:.6} GHz", d_p / GHZ));
    let (fdr_p, s_p) = if inv.eps != bare.eps_b {
        let (_, fdr_p) = differential_fdr(&obs, &bare, inv.eps)?;
        (
            Some(fdr_p),
            Some(proposed_sensitivity(fdr_p, bare.delta_f_b())?),
        )
    } else {
        (None, None)
    };
    match (fdr_p, s_p) {
        (Some(f), Some(s)) => out.line(format_args!(
            "FDR_p = {:.4} MHz/unit  S_p = {:.4} %",
            f / MHZ,
            s
        )),
        _ => out.line(format_args!("FDR_p, S_p: n/a (unloaded state)")),
    }
    let edge = if inv.at_domain_edge {
        "  [at calibration domain edge]"
    } else {
        ""
    };
    out.line(format_args!(
        "eps = {:.4} (calibrated on [{}, {}]){edge}",
        inv.eps, curve.domain[0], curve.domain[1]
    ));

    if let Some(path) = &args.out {
        let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
        let text = format!(
            "f_u_hz,f_d_hz,diff_hz,d_p_hz,eps,at_domain_edge,fdr_p_hz,s_p_pct\n{f_u},{f_d},{diff},{d_p},{},{},{},{}\n",
            inv.eps,
            inv.at_domain_edge,
            opt(fdr_p),
            opt(s_p)
        );
        write_output(&mut out, path, &text)?;
    }
    Ok(out)
}
