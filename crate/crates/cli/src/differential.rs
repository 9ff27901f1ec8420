use std::fmt::Write as _;

use srsense::sensing::drift_cancellation_report;
use srsense::units::{GHZ, MHZ};

use crate::args::DifferentialArgs;
use crate::inputs::timed_observations;
use crate::{write_output, CliError, CommandOutcome};

pub fn cmd_differential(args: &DifferentialArgs) -> Result<CommandOutcome, CliError> {
    let series = timed_observations(&args.observations)?;
    let report = drift_cancellation_report(&series)?;

    let mut out = CommandOutcome::default();
    out.line(format_args!("{:>14} {:>16}", "t (s)", "DIFF (GHz)"));
    for (t, diff) in &report.diffs {
        out.line(format_args!(
            "{:>14} {:>16.9}",
            t.map_or_else(|| "-".to_owned(), |t| t.to_string()),
            diff / GHZ
        ));
    }
    out.line(format_args!(
        "common-mode range {:.6} MHz",
        report.common_mode_range / MHZ
    ));
    out.line(format_args!(
        "DIFF spread {:.6} MHz",
        report.diff_spread / MHZ
    ));
    if report.is_cancelled(args.tolerance) {
        out.line(format_args!("PASS: drift is common-mode and cancelled"));
    } else {
        out.line(format_args!(
            "FAIL: differential-mode residual of {:.6} MHz is not cancelled",
            report.diff_spread / MHZ
        ));
    }

    if let Some(path) = &args.out {
        let mut text = String::from("timestamp_s,diff_hz\n");
        for (t, diff) in &report.diffs {
            let _ = writeln!(
                text,
                "{},{diff}",
                t.map_or_else(String::new, |t| t.to_string())
            );
        }
        write_output(&mut out, path, &text)?;
    }
    Ok(out)
}
