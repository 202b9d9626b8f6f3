//! `sense.json`: sensitivity report at one configuration and a Monte-Carlo
//! homodyne estimate of the same parameter.

use crate::config::SenseConfig;
use crate::error::CliError;
use crate::output::{write_json, Meta};
use papt_core::{monte_carlo_estimate, sensitivity_report, CoherentPair, ModelParams, Parameter, SensorConfig, C64};
use serde_json::json;
use std::path::Path;

pub fn run(cfg: &SenseConfig, seed: u64, meta: &Meta, out: &Path) -> Result<(), CliError> {
    let p = ModelParams::with_complex_kappa(cfg.delta, C64::new(cfg.kappa, cfg.kappa_im));
    p.validate()?;
    let mut sensor = match cfg.t {
        Some(t) => SensorConfig::at_time(p, t),
        None => SensorConfig::working_point(p, cfg.n),
    }
    .with_wrt(cfg.wrt);
    if let Some(a) = cfg.alpha {
        sensor = sensor.with_alphas(CoherentPair::sensing(a));
    }
    let t = sensor.resolve_time()?;
    let report = sensitivity_report(&sensor)?;
    let true_params = match (cfg.true_value, cfg.wrt) {
        (None, _) => p,
        (Some(k), Parameter::Kappa) => ModelParams::with_complex_kappa(cfg.delta, C64::new(k, cfg.kappa_im)),
        (Some(d), Parameter::Delta) => ModelParams::with_complex_kappa(d, p.kappa),
    };
    let mc = monte_carlo_estimate(&sensor, &true_params, cfg.shots, seed)?;
    write_json(
        meta,
        out,
        "sense.json",
        json!({
            "time": t,
            "alphas": sensor.alphas,
            "report": report,
            "monte_carlo": mc,
        }),
    )
}
