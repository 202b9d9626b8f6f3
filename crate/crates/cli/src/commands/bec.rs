//! Ring condensate: `bec_trajectory.csv` for one coupling, `bec_sweep.csv` across
//! `gΦ₀²`, and `bec_density.csv` for selected couplings.

use crate::config::BecConfig;
use crate::error::CliError;
use crate::output::{num, Meta, Table};
use papt_core::bec::{density_profile, evolve, sensing_sweep, theta_grid};
use papt_core::BecParams;
use rayon::prelude::*;
use std::path::Path;

fn params(cfg: &BecConfig, g_phi0_sq: f64, alpha: f64) -> BecParams {
    let mut p = BecParams::ring(g_phi0_sq, alpha);
    p.e1 = cfg.e1;
    p.phi0_sq = cfg.phi0_sq;
    p.n_max = cfg.n_max;
    p.dt = cfg.dt;
    p.with_g_phi0_sq(g_phi0_sq)
}

pub fn run(cfg: &BecConfig, meta: &Meta, out: &Path) -> Result<(), CliError> {
    cfg.validate()?;

    let p = params(cfg, cfg.g_phi0_sq, cfg.alpha);
    let run = evolve(&p, cfg.t_end, Some(cfg.sample_every))?;
    let mut cols = vec!["t".to_string(), "re_phi".into(), "im_phi".into()];
    cols.extend((1..=p.n_max).map(|n| format!("s_{n}")));
    cols.extend(["x_p1".into(), "p_p1".into(), "depletion".into(), "visibility".into()]);
    let mut table = Table::new(cols);
    if run.dt != p.dt {
        table
            .notes
            .push(format!("step reduced to {} for symplectic accuracy", num(run.dt)));
    }
    for s in &run.samples {
        let mut row = vec![num(s.t), num(s.phi.re), num(s.phi.im)];
        row.extend(s.s_n.iter().map(|&x| num(x)));
        row.extend([
            num(s.quadratures.x_p1),
            num(s.quadratures.p_p1),
            num(s.depletion),
            num(s.visibility),
        ]);
        table.push(row);
    }
    table.write(meta, out, "bec_trajectory.csv")?;

    let sw = &cfg.sweep;
    let base = params(cfg, cfg.g_phi0_sq, sw.alpha);
    let rows = sensing_sweep(&base, &sw.grid.values("bec.sweep.grid")?, sw.t)?;
    let mut table = Table::new(["g", "x", "chi_g", "visibility", "max_depletion", "flagged"]);
    for r in &rows {
        table.push(vec![
            num(r.g),
            num(r.x),
            num(r.chi_g),
            num(r.visibility),
            num(r.max_depletion),
            (r.flagged as u8).to_string(),
        ]);
    }
    table.write(meta, out, "bec_sweep.csv")?;

    let theta = theta_grid(sw.theta_points);
    let profiles = sw
        .profiles
        .par_iter()
        .map(|&g| {
            let p = params(cfg, g, sw.alpha);
            let run = evolve(&p, sw.t, None)?;
            Ok(density_profile(&run.final_state, &p, &theta))
        })
        .collect::<Result<Vec<_>, papt_core::Error>>()?;
    let mut table = Table::new(["g", "theta", "rho"]);
    for (&g, prof) in sw.profiles.iter().zip(&profiles) {
        table
            .notes
            .push(format!("g {}: visibility {}", num(g), num(prof.visibility)));
        for (th, rho) in prof.theta.iter().zip(&prof.rho) {
            table.push(vec![num(g), num(*th), num(*rho)]);
        }
    }
    table.write(meta, out, "bec_density.csv")
}
