//! Run configuration. Every block has defaults, so an empty file is valid; unknown
//! keys are rejected.

use crate::error::CliError;
use papt_core::fock::{Propagator, SaturationPolicy};
use papt_core::{FwmParams, Parameter};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub fig1: Fig1Config,
    pub fig2: Fig2Config,
    pub fock: FockConfig,
    pub bec: BecConfig,
    pub sense: SenseConfig,
    pub fwm: Option<FwmParams>,
}

/// Inclusive uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub const fn new(start: f64, stop: f64, points: usize) -> Self {
        Self { start, stop, points }
    }

    /// Grid values rounded to 12 significant decimals so that `0.462` on a grid
    /// compares equal to the literal.
    pub fn values(&self, name: &str) -> Result<Vec<f64>, CliError> {
        if self.points == 0 {
            return Err(CliError::Config(format!("{name}: grid has no points")));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::Config(format!("{name}: grid bounds must be finite")));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|k| {
                let x = self.start + step * k as f64;
                (x * 1e12).round() / 1e12
            })
            .collect())
    }
}

fn nonempty(name: &str, v: &[f64]) -> Result<(), CliError> {
    if v.is_empty() {
        return Err(CliError::Config(format!("{name}: empty list")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Config(format!("{name}: values must be finite")));
    }
    Ok(())
}

/// Squeezing versus time and versus coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig1Config {
    pub delta: f64,
    /// `κ/δ` values for the time traces.
    pub ratios: Vec<f64>,
    pub time: Grid,
    /// `κ/δ` grid for the coupling sweep.
    pub kappa: Grid,
    /// `|δ|t` values for the coupling sweep.
    pub times: Vec<f64>,
}

impl Default for Fig1Config {
    fn default() -> Self {
        Self {
            delta: 1.0,
            ratios: vec![0.95, 1.0, 1.05],
            time: Grid::new(0.0, 30.0, 601),
            kappa: Grid::new(0.9, 1.05, 1501),
            times: vec![15.0, 30.0],
        }
    }
}

impl Fig1Config {
    pub fn validate(&self) -> Result<(), CliError> {
        nonempty("fig1.ratios", &self.ratios)?;
        nonempty("fig1.times", &self.times)?;
        self.time.values("fig1.time")?;
        self.kappa.values("fig1.kappa")?;
        Ok(())
    }
}

/// Susceptibility, inverse error and QFI datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig2Config {
    pub delta: f64,
    /// Coherent amplitude; `2·sign(δ)` when absent.
    pub alpha: Option<f64>,
    /// `κ/δ` grid for the susceptibility panel.
    pub kappa: Grid,
    /// `|δ|t` values for the fixed-time curves.
    pub times: Vec<f64>,
    /// Working point `λ₀t = nπ` of the bold curve and of the amplitude sweep.
    pub working_n: u32,
    /// `κ/δ` values of the time traces.
    pub trace_ratios: Vec<f64>,
    pub time: Grid,
    pub alpha_grid: Grid,
    /// `κ/δ` of the amplitude sweep.
    pub alpha_ratio: f64,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Self {
            delta: 1.0,
            alpha: None,
            kappa: Grid::new(0.85, 0.999, 1491),
            times: vec![10.0, 15.0, 30.0],
            working_n: 2,
            trace_ratios: vec![0.94, 0.95],
            time: Grid::new(0.0, 60.0, 1201),
            alpha_grid: Grid::new(0.1, 10.0, 100),
            alpha_ratio: 0.95,
        }
    }
}

impl Fig2Config {
    pub fn validate(&self) -> Result<(), CliError> {
        nonempty("fig2.times", &self.times)?;
        nonempty("fig2.trace_ratios", &self.trace_ratios)?;
        self.kappa.values("fig2.kappa")?;
        self.time.values("fig2.time")?;
        self.alpha_grid.values("fig2.alpha_grid")?;
        if self.working_n == 0 {
            return Err(CliError::Config("fig2.working_n must be positive".into()));
        }
        Ok(())
    }
}

/// Truncated Fock-space traces with and without Kerr interaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FockConfig {
    pub delta: f64,
    pub ratios: Vec<f64>,
    /// Kerr strengths in units of `δ`.
    pub kerr: Vec<f64>,
    /// Photon-number cutoff of the pair sector.
    pub cutoff: usize,
    pub time: Grid,
    pub saturation: SaturationPolicy,
    pub propagator: Propagator,
}

impl Default for FockConfig {
    fn default() -> Self {
        Self {
            delta: 1.0,
            ratios: vec![0.95, 0.99, 1.0, 1.05],
            kerr: vec![0.0, 1e-6],
            cutoff: 2000,
            time: Grid::new(0.0, 30.0, 121),
            saturation: SaturationPolicy::Truncate,
            propagator: Propagator::default(),
        }
    }
}

impl FockConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        nonempty("fock.ratios", &self.ratios)?;
        nonempty("fock.kerr", &self.kerr)?;
        self.time.values("fock.time")?;
        Ok(())
    }
}

/// Ring-condensate trajectory, sensing sweep and density profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BecConfig {
    pub e1: f64,
    pub phi0_sq: f64,
    pub n_max: usize,
    pub dt: f64,
    /// `gΦ₀²/E₁` of the trajectory run.
    pub g_phi0_sq: f64,
    pub alpha: f64,
    pub t_end: f64,
    pub sample_every: f64,
    pub sweep: BecSweepConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BecSweepConfig {
    pub alpha: f64,
    pub t: f64,
    pub grid: Grid,
    /// `gΦ₀²` values whose density profiles are written.
    pub profiles: Vec<f64>,
    pub theta_points: usize,
}

impl Default for BecConfig {
    fn default() -> Self {
        Self {
            e1: 1.0,
            phi0_sq: 1e5,
            n_max: 10,
            dt: 1e-3,
            g_phi0_sq: 0.48,
            alpha: 2.0,
            t_end: 30.0,
            sample_every: 0.05,
            sweep: BecSweepConfig::default(),
        }
    }
}

impl Default for BecSweepConfig {
    fn default() -> Self {
        Self {
            alpha: 20.0,
            t: 30.0,
            grid: Grid::new(0.44, 0.49, 51),
            profiles: vec![0.46, 0.462, 0.465, 0.468],
            theta_points: 360,
        }
    }
}

impl BecConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.sweep.grid.values("bec.sweep.grid")?;
        if !(self.sample_every > 0.0) {
            return Err(CliError::Config("bec.sample_every must be positive".into()));
        }
        if self.sweep.theta_points < 2 {
            return Err(CliError::Config("bec.sweep.theta_points must be at least 2".into()));
        }
        Ok(())
    }
}

/// Single-configuration sensitivity report and Monte-Carlo check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SenseConfig {
    pub delta: f64,
    pub kappa: f64,
    pub kappa_im: f64,
    /// Coherent amplitude in the `(iα, α)` convention; `2·sign(δ)` when absent.
    pub alpha: Option<f64>,
    /// Working point index; ignored when `t` is given.
    pub n: u32,
    pub t: Option<f64>,
    pub wrt: Parameter,
    pub shots: usize,
    /// Value of the estimated parameter used to draw the shots; the reference value when absent.
    pub true_value: Option<f64>,
}

impl Default for SenseConfig {
    fn default() -> Self {
        Self {
            delta: 1.0,
            kappa: 0.95,
            kappa_im: 0.0,
            alpha: None,
            n: 2,
            t: None,
            wrt: Parameter::Kappa,
            shots: 10_000,
            true_value: None,
        }
    }
}

/// Parse TOML, or JSON when the file name ends in `.json`.
pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    } else {
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}
