use std::collections::BTreeMap;

use srsense::dataio::{write_calibration, CalibrationRecord};
use srsense::sensing::{differential_fdr, fit_power_law, proposed_sensitivity, CurveKind};
use srsense::units::{GHZ, MHZ};

use crate::args::CalibrateArgs;
use crate::inputs::{labelled_observations, parse_bare_pair};
use crate::{write_output, CliError, CommandOutcome};

pub fn cmd_calibrate(args: &CalibrateArgs) -> Result<CommandOutcome, CliError> {
    let bare = parse_bare_pair(&args.bare, args.eps_b, args.threshold_db)?;
    let observations = labelled_observations(&args.observations)?;
    if observations.len() < 3 {
        return Err(CliError::Validation(format!(
            "{}: need at least 3 observations, got {}",
            args.observations.display(),
            observations.len()
        )));
    }

    let mut out = CommandOutcome::default();
    out.line(format_args!(
        "{:>12} {:>9} {:>12} {:>14} {:>9}",
        "label", "eps", "D_p (GHz)", "FDR_p (MHz)", "S_p (%)"
    ));
    let (mut fdr_pts, mut s_pts) = (Vec::new(), Vec::new());
    for obs in &observations {
        let eps = obs.eps_ref.unwrap_or(f64::NAN);
        let (d_p, fdr_p) = differential_fdr(obs, &bare, eps)?;
        let s_p = proposed_sensitivity(fdr_p, bare.delta_f_b())?;
        out.line(format_args!(
            "{:>12} {eps:>9.3} {:>12.6} {:>14.4} {s_p:>9.4}",
            obs.label,
            d_p / GHZ,
            fdr_p / MHZ
        ));
        fdr_pts.push((eps, fdr_p));
        s_pts.push((eps, s_p));
    }

    let fdr = fit_power_law(&fdr_pts, CurveKind::FdrP)?;
    let sens = fit_power_law(&s_pts, CurveKind::SensitivityP)?;
    out.line(format_args!(
        "FDR_p = {:.6} GHz * eps^({:.6})  r2 = {:.6}",
        fdr.a / GHZ,
        fdr.b,
        fdr.r2
    ));
    out.line(format_args!(
        "S_p   = {:.6} % * eps^({:.6})  r2 = {:.6}",
        sens.a, sens.b, sens.r2
    ));
    if fdr.b >= 0.0 {
        out.warnings.push(format!(
            "fitted FDR_p exponent {} is not negative; the curve cannot be inverted",
            fdr.b
        ));
    }

    if let Some(path) = &args.out {
        let record = CalibrationRecord {
            metadata: BTreeMap::from([
                (
                    "observations".to_owned(),
                    args.observations.display().to_string(),
                ),
                ("points".to_owned(), observations.len().to_string()),
                ("f_bu_hz".to_owned(), bare.f_bu.to_string()),
                ("f_bd_hz".to_owned(), bare.f_bd.to_string()),
                ("eps_b".to_owned(), bare.eps_b.to_string()),
            ]),
            curves: vec![fdr, sens],
        };
        write_output(&mut out, path, &write_calibration(&record)?)?;
    }
    Ok(out)
}
