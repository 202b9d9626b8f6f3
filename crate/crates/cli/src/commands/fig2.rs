//! `fig2_kappa.csv`: `⟨X₁⟩` and `|χ_κ|` across `κ/δ` at fixed `|δ|t`, plus the
//! working-point curve. `fig2_time.csv`: `Δ⁻²` and `F` in time.
//! `fig2_alpha.csv`: amplitude sweep at the working point.

use crate::config::Fig2Config;
use crate::error::CliError;
use crate::output::{num, opt, Meta, Table};
use papt_core::dynamics::{quadrature_mean, Mode};
use papt_core::{
    inverse_variance, qfi, sensitivity_report, susceptibility, CoherentPair, Error, ModelParams, SensorConfig,
};
use rayon::prelude::*;
use std::path::Path;

fn tag(x: f64) -> String {
    num(x).replace('.', "p")
}

fn collect_rows<F>(xs: &[f64], f: F) -> Result<Vec<Vec<String>>, CliError>
where
    F: Fn(f64) -> Result<Vec<String>, Error> + Sync,
{
    Ok(xs.par_iter().map(|&x| f(x)).collect::<Result<_, Error>>()?)
}

pub fn run(cfg: &Fig2Config, meta: &Meta, out: &Path) -> Result<(), CliError> {
    cfg.validate()?;
    let d = cfg.delta;
    if d == 0.0 || !d.is_finite() {
        return Err(CliError::Config("fig2.delta must be finite and nonzero".into()));
    }
    let alphas = CoherentPair::sensing(cfg.alpha.unwrap_or(2.0 * d.signum()));
    let n = cfg.working_n;

    let mut cols = vec!["kappa".to_string()];
    for &dt in &cfg.times {
        cols.extend([format!("x1_t{}", tag(dt)), format!("abs_chi_t{}", tag(dt))]);
    }
    cols.extend([format!("t_n{n}"), format!("x1_n{n}"), format!("abs_chi_n{n}")]);
    let mut table = Table::new(cols);
    let rows = collect_rows(&cfg.kappa.values("fig2.kappa")?, |r| {
        let p = ModelParams::new(d, r * d);
        let mut row = vec![num(r)];
        for &dt in &cfg.times {
            let t = dt / d.abs();
            let chi = susceptibility(&SensorConfig::at_time(p, t).with_alphas(alphas))?;
            row.extend([num(quadrature_mean(&p, t, &alphas, 0.0, Mode::First)), num(chi.abs())]);
        }
        // Empty outside the broken regime.
        let wp = SensorConfig::working_point(p, n).with_alphas(alphas);
        match wp.resolve_time() {
            Ok(t) => {
                let chi = susceptibility(&wp)?;
                row.extend([
                    num(t),
                    num(quadrature_mean(&p, t, &alphas, 0.0, Mode::First)),
                    num(chi.abs()),
                ]);
            }
            Err(Error::NotBroken) => row.extend([opt(None), opt(None), opt(None)]),
            Err(e) => return Err(e),
        }
        Ok(row)
    })?;
    rows.into_iter().for_each(|r| table.push(r));
    table.write(meta, out, "fig2_kappa.csv")?;

    let mut cols = vec!["t".to_string()];
    for &r in &cfg.trace_ratios {
        cols.extend([format!("inv_var_{}", tag(r)), format!("qfi_{}", tag(r))]);
    }
    let mut table = Table::new(cols);
    let rows = collect_rows(&cfg.time.values("fig2.time")?, |t| {
        let mut row = vec![num(t)];
        for &r in &cfg.trace_ratios {
            let c = SensorConfig::at_time(ModelParams::new(d, r * d), t).with_alphas(alphas);
            row.extend([num(inverse_variance(&c)?), num(qfi(&c)?)]);
        }
        Ok(row)
    })?;
    rows.into_iter().for_each(|r| table.push(r));
    table.write(meta, out, "fig2_time.csv")?;

    let p = ModelParams::new(d, cfg.alpha_ratio * d);
    let mut table = Table::new(["alpha", "chi", "inv_var", "qfi", "ratio"]);
    let rows = collect_rows(&cfg.alpha_grid.values("fig2.alpha_grid")?, |a| {
        let c = SensorConfig::working_point(p, n).with_alphas(CoherentPair::sensing(a * d.signum()));
        let r = sensitivity_report(&c)?;
        Ok(vec![num(a), num(r.chi), num(r.inv_var), num(r.qfi), num(r.ratio)])
    })?;
    rows.into_iter().for_each(|r| table.push(r));
    table.write(meta, out, "fig2_alpha.csv")
}
