//! `fig1_time.csv`: `S(t)` for each `κ/δ`. `fig1_kappa.csv`: `S`, `Re A`, `Im A`
//! across `κ/δ` at each `|δ|t`.

use crate::config::Fig1Config;
use crate::error::CliError;
use crate::output::{num, Meta, Table};
use papt_core::{squeeze_summary, transfer_coeffs, ModelParams};
use rayon::prelude::*;
use std::path::Path;

fn tag(x: f64) -> String {
    num(x).replace('.', "p")
}

pub fn run(cfg: &Fig1Config, meta: &Meta, out: &Path) -> Result<(), CliError> {
    cfg.validate()?;
    let d = cfg.delta;
    let times = cfg.time.values("fig1.time")?;
    let kappas = cfg.kappa.values("fig1.kappa")?;

    let mut cols = vec!["t".to_string()];
    cols.extend(cfg.ratios.iter().map(|r| format!("s_{}", tag(*r))));
    let mut time_table = Table::new(cols);
    let rows: Vec<Vec<String>> = times
        .par_iter()
        .map(|&t| {
            let mut row = vec![num(t)];
            for &r in &cfg.ratios {
                row.push(num(squeeze_summary(&ModelParams::new(d, r * d), t)?.squeezing));
            }
            Ok(row)
        })
        .collect::<Result<_, papt_core::Error>>()?;
    rows.into_iter().for_each(|r| time_table.push(r));
    time_table.write(meta, out, "fig1_time.csv")?;

    let mut cols = vec!["kappa".to_string()];
    for &dt in &cfg.times {
        let s = tag(dt);
        cols.extend([format!("s_t{s}"), format!("re_a_t{s}"), format!("im_a_t{s}")]);
    }
    let mut kappa_table = Table::new(cols);
    let rows: Vec<Vec<String>> = kappas
        .par_iter()
        .map(|&r| {
            let p = ModelParams::new(d, r * d);
            let mut row = vec![num(r)];
            for &dt in &cfg.times {
                let t = dt / d.abs();
                let a = transfer_coeffs(&p, t).a;
                row.extend([num(squeeze_summary(&p, t)?.squeezing), num(a.re), num(a.im)]);
            }
            Ok(row)
        })
        .collect::<Result<_, papt_core::Error>>()?;
    rows.into_iter().for_each(|r| kappa_table.push(r));
    kappa_table.write(meta, out, "fig1_kappa.csv")
}
