//! Four-wave-mixing realization: laboratory parameters to [`ModelParams`].
//!
//! Propagation distance `z` plays the role of time, so the mapped `δ` and `κ`
//! are in rad/m and working points come out as medium lengths.

use crate::dynamics::ModelParams;
use crate::error::{Error, Result};
use crate::sensing::working_points;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Inputs in SI-derived units: rates and Rabi frequencies in rad/s, density in
/// m⁻³, cross sections in m², wave numbers in rad/m, angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FwmParams {
    pub omega_c: f64,
    pub omega_p: f64,
    pub delta_p: f64,
    pub n_a: f64,
    pub sigma_13: f64,
    pub sigma_24: f64,
    pub gamma_12: f64,
    pub gamma_13: f64,
    pub gamma_14: f64,
    pub k1: f64,
    pub k2: f64,
    pub kc: f64,
    pub kp: f64,
    pub theta_cp: f64,
}

/// `2π/λ`.
pub fn wavenumber(wavelength: f64) -> f64 {
    2.0 * PI / wavelength
}

impl FwmParams {
    /// A warm-vapor operating point: 780 nm pump, 795 nm coupling, 0.2° crossing,
    /// generated fields with `k₁ + k₂ = k_c + k_p`.
    pub fn typical() -> Self {
        let mhz = 2.0 * PI * 1e6;
        let kp = wavenumber(780e-9);
        let kc = wavenumber(795e-9);
        Self {
            omega_c: 10.0 * mhz,
            omega_p: 0.3 * mhz,
            delta_p: 100.0 * mhz,
            n_a: 1e16,
            sigma_13: 1e-13,
            sigma_24: 1e-13,
            gamma_12: 0.01 * mhz,
            gamma_13: 3.0 * mhz,
            gamma_14: 3.0 * mhz,
            k1: kp,
            k2: kc,
            kc,
            kp,
            theta_cp: 0.2f64.to_radians(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("N_a", self.n_a),
            ("sigma_13", self.sigma_13),
            ("sigma_24", self.sigma_24),
            ("gamma_12", self.gamma_12),
            ("gamma_13", self.gamma_13),
            ("gamma_14", self.gamma_14),
            ("k1", self.k1),
            ("k2", self.k2),
            ("kc", self.kc),
            ("kp", self.kp),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        for (name, v) in [
            ("Omega_c", self.omega_c),
            ("Omega_p", self.omega_p),
            ("Delta_p", self.delta_p),
            ("theta_cp", self.theta_cp),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be finite")));
            }
        }
        if self.delta_p == 0.0 {
            return Err(Error::InvalidParameter("pump detuning Delta_p must be nonzero".into()));
        }
        Ok(())
    }
}

/// Nonlinear coupling `κ̃` in rad/m.
pub fn fwm_coupling(p: &FwmParams) -> Result<f64> {
    p.validate()?;
    let strength = p.n_a * (p.sigma_13 * p.sigma_24 * p.gamma_13 * p.gamma_14).sqrt()
        / (p.omega_c * p.omega_c + 4.0 * p.gamma_13 * p.gamma_12);
    Ok(strength * p.omega_p * p.omega_c / (2.0 * p.delta_p))
}

/// Phase mismatch `Δk = k₁ + k₂ − (k_c + k_p)cos θ` and the mapped model
/// `δ = −Δk/2`, `κ = −κ̃`.
pub fn phase_mismatch(p: &FwmParams) -> Result<(f64, ModelParams)> {
    let kappa = fwm_coupling(p)?;
    // 1 − cos θ = 2 sin²(θ/2) keeps the digits at small crossing angles.
    let dk = ((p.k1 + p.k2) - (p.kc + p.kp)) + (p.kc + p.kp) * 2.0 * (0.5 * p.theta_cp).sin().powi(2);
    Ok((dk, ModelParams::new(-0.5 * dk, -kappa)))
}

/// Medium lengths `L_n = nπ/λ₀` (meters) at which the mapped model sits on a working point.
pub fn working_lengths(p: &FwmParams, n_max: u32) -> Result<Vec<f64>> {
    let (_, model) = phase_mismatch(p)?;
    working_points(&model, n_max)
}
