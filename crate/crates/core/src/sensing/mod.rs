//! Exceptional-point metrology: parameter derivatives of the transfer
//! coefficients, homodyne susceptibility, quantum Fisher information of the
//! evolved coherent state and the working points `λ₀t = nπ`.

pub mod monte_carlo;

use crate::dynamics::{
    classify_regime, kernel_derivatives, kernels, lambda0, quadrature_variance, transfer_coeffs, CoherentPair,
    ModelParams, Regime, DEFAULT_REGIME_TOL,
};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::RangeInclusive;

pub use monte_carlo::{monte_carlo_estimate, MonteCarloSummary};

/// Which model parameter is being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    /// Real part of the coupling.
    #[default]
    Kappa,
    Delta,
}

/// `∂A` and `∂B` at fixed time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffDerivatives {
    pub da: C64,
    pub db: C64,
}

pub fn coeff_derivatives(params: &ModelParams, t: f64, wrt: Parameter) -> CoeffDerivatives {
    let s = params.discriminant();
    let (_, sn) = kernels(s, t);
    let (dc, dsn) = kernel_derivatives(s, t);
    let delta = params.delta;
    let kappa = params.kappa;
    // A = c − iδ·sn and B = κ·sn, with c and sn functions of s = δ² − |κ|².
    let da_ds = C64::new(dc, -delta * dsn);
    match wrt {
        Parameter::Kappa => {
            let ds = -2.0 * kappa.re;
            CoeffDerivatives {
                da: da_ds * ds,
                db: C64::new(sn, 0.0) + kappa * (dsn * ds),
            }
        }
        Parameter::Delta => {
            let ds = 2.0 * delta;
            CoeffDerivatives {
                da: da_ds * ds - C64::new(0.0, sn),
                db: kappa * (dsn * ds),
            }
        }
    }
}

/// Evolution time: either explicit or the `n`-th working point `nπ/λ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensorTime {
    Fixed(f64),
    WorkingPoint(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorConfig {
    pub params: ModelParams,
    pub alphas: CoherentPair,
    pub time: SensorTime,
    pub wrt: Parameter,
}

impl SensorConfig {
    /// Default coherent convention (`α₁ = iα`, `α₂ = α`, `α = 2·sign δ`) at working point `n`.
    pub fn working_point(params: ModelParams, n: u32) -> Self {
        Self {
            params,
            alphas: CoherentPair::sensing_default(&params),
            time: SensorTime::WorkingPoint(n),
            wrt: Parameter::Kappa,
        }
    }

    pub fn at_time(params: ModelParams, t: f64) -> Self {
        Self {
            params,
            alphas: CoherentPair::sensing_default(&params),
            time: SensorTime::Fixed(t),
            wrt: Parameter::Kappa,
        }
    }

    pub fn with_alphas(mut self, alphas: CoherentPair) -> Self {
        self.alphas = alphas;
        self
    }

    pub fn with_wrt(mut self, wrt: Parameter) -> Self {
        self.wrt = wrt;
        self
    }

    pub fn resolve_time(&self) -> Result<f64> {
        match self.time {
            SensorTime::Fixed(t) if t.is_finite() => Ok(t),
            SensorTime::Fixed(t) => Err(Error::InvalidParameter(format!("non-finite time {t}"))),
            SensorTime::WorkingPoint(0) => Err(Error::InvalidParameter("working-point index must be positive".into())),
            SensorTime::WorkingPoint(n) => {
                if classify_regime(&self.params, DEFAULT_REGIME_TOL)? != Regime::Broken {
                    return Err(Error::NotBroken);
                }
                Ok(n as f64 * PI / lambda0(&self.params))
            }
        }
    }
}

/// Derivatives of the Heisenberg means `⟨a_j(t)⟩ = A α_j + B α_ĵ*`.
fn mean_derivatives(d: &CoeffDerivatives, alphas: &CoherentPair) -> [C64; 2] {
    [
        d.da * alphas.alpha1 + d.db * alphas.alpha2.conj(),
        d.da * alphas.alpha2 + d.db * alphas.alpha1.conj(),
    ]
}

/// `χ = ∂⟨X₁(0, t)⟩` with respect to the configured parameter.
pub fn susceptibility(config: &SensorConfig) -> Result<f64> {
    let t = config.resolve_time()?;
    let d = coeff_derivatives(&config.params, t, config.wrt);
    Ok(mean_derivatives(&d, &config.alphas)[0].re)
}

/// Quantum Fisher information of the evolved coherent state.
pub fn qfi(config: &SensorConfig) -> Result<f64> {
    let t = config.resolve_time()?;
    let c = transfer_coeffs(&config.params, t);
    let d = coeff_derivatives(&config.params, t, config.wrt);
    let dm = mean_derivatives(&d, &config.alphas);
    let a0sq = c.a.norm_sqr();
    let b0sq = c.b.norm_sqr();
    let ac = c.a.conj();
    // ∂(B/A*)
    let dq = d.db / ac - c.b * d.da.conj() / (ac * ac);
    let f = 4.0 * a0sq * a0sq * dq.norm_sqr() + 4.0 * (a0sq + b0sq) * (dm[0].norm_sqr() + dm[1].norm_sqr())
        - 16.0 * (ac * c.b.conj() * dm[0] * dm[1]).re;
    Ok(f.max(0.0))
}

/// `Δ⁻² = χ² / Var X₁`.
pub fn inverse_variance(config: &SensorConfig) -> Result<f64> {
    let t = config.resolve_time()?;
    let chi = susceptibility(config)?;
    Ok(chi * chi / quadrature_variance(&config.params, t))
}

/// Susceptibility, variance, inverse error and QFI at one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub chi: f64,
    pub variance: f64,
    pub inv_var: f64,
    pub qfi: f64,
    /// `inv_var / qfi`; zero when the QFI vanishes.
    pub ratio: f64,
}

pub fn sensitivity_report(config: &SensorConfig) -> Result<SensitivityReport> {
    let t = config.resolve_time()?;
    let chi = susceptibility(config)?;
    let variance = quadrature_variance(&config.params, t);
    let inv_var = chi * chi / variance;
    let qfi = qfi(config)?;
    let ratio = if qfi > 0.0 { inv_var / qfi } else { 0.0 };
    Ok(SensitivityReport {
        chi,
        variance,
        inv_var,
        qfi,
        ratio,
    })
}

/// Working times `t_n = nπ/λ₀` for `n = 1..=n_max`.
pub fn working_points(params: &ModelParams, n_max: u32) -> Result<Vec<f64>> {
    if classify_regime(params, DEFAULT_REGIME_TOL)? != Regime::Broken {
        return Err(Error::NotBroken);
    }
    let l0 = lambda0(params);
    Ok((1..=n_max).map(|n| n as f64 * PI / l0).collect())
}

/// Couplings `κ_n = sqrt(δ² − (nπ/t)²)` placing a fixed time `t` on a working point.
/// Indices with `nπ/t ≥ |δ|` have no solution and are skipped.
pub fn working_kappas(delta: f64, t: f64, ns: RangeInclusive<u32>) -> Vec<f64> {
    ns.filter(|&n| n > 0)
        .filter_map(|n| {
            let x = n as f64 * PI / t;
            (x < delta.abs()).then(|| ((delta.abs() - x) * (delta.abs() + x)).sqrt())
        })
        .collect()
}

/// Working-point closed form `χ_κ(nT) = −(−1)ⁿ ακ(κ+δ)nπ/λ₀³` for the sensing convention.
///
/// The sign alternates because `cos λ₀t = (−1)ⁿ` there.
pub fn working_point_chi(params: &ModelParams, alpha: f64, n: u32) -> f64 {
    let k = params.kappa.re;
    let l0 = lambda0(params);
    let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
    -parity * alpha * k * (k + params.delta) * n as f64 * PI / (l0 * l0 * l0)
}

#[cfg(test)]
mod invariants;
