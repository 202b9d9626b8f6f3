//! Homodyne Monte-Carlo for the linearized estimator.
//!
//! The evolved state is Gaussian, so the `X₁` homodyne record is normal with the
//! closed-form mean and variance. Each shot is inverted through the local
//! susceptibility at the reference parameters:
//! `θ̂ = θ₀ + (x − ⟨X₁⟩(θ₀))/χ(θ₀)`.
//!
//! Shots are split into fixed-size chunks; chunk `k` draws from a ChaCha8 stream
//! with the run seed and stream id `k`, so the result does not depend on the
//! number of worker threads.

use super::{susceptibility, Parameter, SensorConfig};
use crate::dynamics::{quadrature_mean, quadrature_variance, Mode, ModelParams};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const CHUNK: usize = 1024;
const MIN_SHOTS: usize = 100;
const MIN_CHI: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub shots: usize,
    pub seed: u64,
    /// Mean of the per-shot estimates.
    pub estimate: f64,
    /// Sample variance of the per-shot estimates divided by the number of shots.
    pub estimate_variance: f64,
    /// `Δ²/M` from the closed-form variance and susceptibility at the reference point.
    pub predicted_variance: f64,
    pub chi: f64,
    pub true_value: f64,
}

#[derive(Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n / n,
            m2: self.m2 + other.m2 + d * d * self.n * other.n / n,
        }
    }
}

fn parameter_value(params: &ModelParams, wrt: Parameter) -> f64 {
    match wrt {
        Parameter::Kappa => params.kappa.re,
        Parameter::Delta => params.delta,
    }
}

/// Simulate `shots` homodyne records of `X₁` drawn from `true_params` and estimate
/// the configured parameter by linear inversion around `config.params`.
pub fn monte_carlo_estimate(
    config: &SensorConfig,
    true_params: &ModelParams,
    shots: usize,
    seed: u64,
) -> Result<MonteCarloSummary> {
    if shots < MIN_SHOTS {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_SHOTS} shots, got {shots}"
        )));
    }
    let t = config.resolve_time()?;
    let chi = susceptibility(config)?;
    if !(chi.abs() >= MIN_CHI) {
        return Err(Error::IllConditioned { chi });
    }
    let ref_mean = quadrature_mean(&config.params, t, &config.alphas, 0.0, Mode::First);
    let ref_var = quadrature_variance(&config.params, t);
    let mean = quadrature_mean(true_params, t, &config.alphas, 0.0, Mode::First);
    let sd = quadrature_variance(true_params, t).sqrt();
    let dist = Normal::new(mean, sd).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let theta0 = parameter_value(&config.params, config.wrt);

    let chunks = shots.div_ceil(CHUNK);
    let partial: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let len = CHUNK.min(shots - k * CHUNK);
            let mut m = Moments::default();
            for _ in 0..len {
                let x: f64 = rng.sample(dist);
                m.push(theta0 + (x - ref_mean) / chi);
            }
            m
        })
        .collect();
    let total = partial.into_iter().fold(Moments::default(), Moments::merge);
    let m = shots as f64;

    Ok(MonteCarloSummary {
        shots,
        seed,
        estimate: total.mean,
        estimate_variance: total.m2 / (m - 1.0) / m,
        predicted_variance: ref_var / (chi * chi) / m,
        chi,
        true_value: parameter_value(true_params, config.wrt),
    })
}
