//! `platform.json`: four-wave-mixing inputs mapped onto the two-mode model.

use crate::error::CliError;
use crate::output::{write_json, Meta};
use papt_core::dynamics::DEFAULT_REGIME_TOL;
use papt_core::platform::working_lengths;
use papt_core::{classify_regime, fwm_coupling, lambda0, phase_mismatch, FwmParams, Regime};
use serde_json::json;
use std::path::Path;

const LENGTHS: u32 = 5;

pub fn run(fwm: Option<FwmParams>, meta: &Meta, out: &Path) -> Result<(), CliError> {
    let fwm = fwm.unwrap_or_else(FwmParams::typical);
    let coupling = fwm_coupling(&fwm)?;
    let (dk, model) = phase_mismatch(&fwm)?;
    let regime = classify_regime(&model, DEFAULT_REGIME_TOL)?;
    let lengths = if regime == Regime::Broken {
        working_lengths(&fwm, LENGTHS)?
    } else {
        Vec::new()
    };
    write_json(
        meta,
        out,
        "platform.json",
        json!({
            "fwm": fwm,
            "phase_mismatch": dk,
            "coupling": coupling,
            "model": model,
            "regime": regime,
            "lambda0": lambda0(&model),
            "working_lengths": lengths,
        }),
    )
}
