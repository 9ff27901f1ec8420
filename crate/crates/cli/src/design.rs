use srsense::circuit_params::{synthesize, CellDesign, MutualInductance};
use srsense::dataio::{Branch, SensorConfig};
use srsense::presets::FORMULA_BARE_PAIR;
use srsense::units::{FF, GHZ, MM, MM2, NH, PF, PH};

use crate::args::DesignArgs;
use crate::inputs::config;
use crate::{write_output, CliError, CommandOutcome};

/// Synthesized U and D cells for a configuration.
pub(crate) fn synthesize_pair(cfg: &SensorConfig) -> Result<(CellDesign, CellDesign), CliError> {
    let one = |b: Branch| synthesize(cfg.cell(b), &cfg.stack_for(b), &cfg.synthesis_options(b));
    Ok((one(Branch::U)?, one(Branch::D)?))
}

fn interpretation(cfg: &SensorConfig, b: Branch, d: &CellDesign) -> String {
    let a_avg = if d.a_avg_overridden {
        "override"
    } else {
        "V*T"
    };
    let w_ms = if cfg.overrides(b).w_ms.is_some() {
        "override"
    } else {
        "(T+W_Fd)/2"
    };
    let gap = if d.spiral_gap_overridden {
        "override"
    } else {
        "G"
    };
    let m = match cfg.synthesis_options(b).mutual {
        MutualInductance::Explicit(_) => "override".to_owned(),
        MutualInductance::MatchTankInductance(l) => format!("match tank L_i = {:.2} pH", l / PH),
    };
    format!(
        "A_AVG = {a_avg} ({:.4} mm^2), W_MS = {w_ms} ({:.4} mm), spiral gap = {gap} ({:.3} mm), M: {m}",
        d.a_avg / MM2,
        d.w_ms / MM,
        d.spiral_gap / MM
    )
}

const TABLE_HEADER: &str =
    "branch,eps_eff_rel,l_sp_h,c_sp_f,l_l_h,c_l_f,l_s_h,c_s_f,m_h,l_i_h,c_i_f,f_hz,a_avg_m2,w_ms_m,spiral_gap_m";

fn table_row(name: &str, d: &CellDesign) -> String {
    let c = &d.cell;
    format!(
        "{name},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        d.eps_eff_rel,
        c.l_sp,
        c.c_sp,
        c.l_l,
        c.c_l,
        c.l_s,
        c.c_s,
        c.m,
        d.tank.l_i,
        d.tank.c_i,
        d.resonance(),
        d.a_avg,
        d.w_ms,
        d.spiral_gap
    )
}

pub fn cmd_design(args: &DesignArgs) -> Result<CommandOutcome, CliError> {
    let mut cfg = config(args.config.as_deref())?;
    if let Some(eps) = args.eps_m {
        cfg.stack.eps_m = eps;
        cfg.stack.validate()?;
    }
    let (u, d) = synthesize_pair(&cfg)?;

    let mut out = CommandOutcome::default();
    out.line(format_args!(
        "eps_M = {}  eps_eff,r = {}",
        cfg.stack.eps_m, u.eps_eff_rel
    ));
    for (name, b, x) in [("U", Branch::U, &u), ("D", Branch::D, &d)] {
        let c = &x.cell;
        out.line(format_args!(
            "{name}: L_SP = {:.4} nH  C_SP = {:.4} fF  L_L = {:.4} nH  C_L = {:.4} fF",
            c.l_sp / NH,
            c.c_sp / FF,
            c.l_l / NH,
            c.c_l / FF
        ));
        out.line(format_args!(
            "{name}: L_S = {:.4} nH  C_S = {:.4} fF  M = {:.4} nH  tank {:.3} pH / {:.3} pF",
            c.l_s / NH,
            c.c_s / FF,
            c.m / NH,
            x.tank.l_i / PH,
            x.tank.c_i / PF
        ));
        out.line(format_args!("{name}: {}", interpretation(&cfg, b, x)));
    }
    let (fu, fd) = (u.resonance(), d.resonance());
    out.line(format_args!(
        "f_U = {:.4} GHz  f_D = {:.4} GHz  f_D/f_U = {:.4}",
        fu / GHZ,
        fd / GHZ,
        fd / fu
    ));
    let (ru, rd) = FORMULA_BARE_PAIR;
    out.line(format_args!(
        "reference unloaded pair {:.2}/{:.2} GHz (ratio {:.4}): deviation {:+.1}% / {:+.1}%",
        ru / GHZ,
        rd / GHZ,
        rd / ru,
        100.0 * (fu / ru - 1.0),
        100.0 * (fd / rd - 1.0)
    ));

    if let Some(path) = &args.out {
        let text = format!(
            "{TABLE_HEADER}\n{}\n{}\n",
            table_row("U", &u),
            table_row("D", &d)
        );
        write_output(&mut out, path, &text)?;
    }
    Ok(out)
}
