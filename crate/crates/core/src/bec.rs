//! Hartree–Fock–Bogoliubov dynamics of a condensate in a ring.
//!
//! The field is `Ψ(θ) = e^{−iπ/4}Φ + Σ_{n≠0} ψ_n e^{inθ}/√(2π)` in the frame
//! rotating with the chemical potential. Each pair `(ψ_n, ψ_{−n}†)` evolves with
//! the Bogoliubov matrix `H_n(Φ) = [[δ_n, igΦ²], [ig(Φ*)², −δ_n]]`,
//! `δ_n = n²E₁ − g|Φ|²`, and is stored as a transfer matrix
//! `M_n = [[A_n, B_n], [B_n*, A_n*]]`. The condensate feels the pairs through
//!
//! ```text
//! i∂ₜΦ = −i(g/2π) Σ_{n≠0} ⟨ψ_nψ_{−n}⟩ Φ* − (g/2π) Σ_{n≠0} ⟨ψ_n†ψ_n⟩ Φ
//! ```
//!
//! Only `n = ±1` carry a coherent seed; every other pair starts in vacuum.
//!
//! Time stepping is RK4 in the integrating-factor frame of the Bogoliubov matrix
//! frozen at the start of each step, so the fast `n²E₁` rotation is exact and
//! only the slow back-action is integrated numerically.

use crate::dynamics::{kernels, squeeze_summary, ModelParams};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Allowed change of `|A|² − |B|²` in a single step.
pub const STEP_DEFECT_LIMIT: f64 = 1e-10;
const MAX_HALVINGS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BecParams {
    /// Kinetic energy of the first ring mode, `1/(2mR²)`.
    pub e1: f64,
    /// Interaction strength; positive is attractive.
    pub g: f64,
    /// Initial condensate amplitude squared `|Φ₀|²`.
    pub phi0_sq: f64,
    pub n_max: usize,
    pub alpha_plus: C64,
    pub alpha_minus: C64,
    pub dt: f64,
    /// Switch off to freeze `Φ` at its initial value.
    pub backaction: bool,
}

impl BecParams {
    /// Ring defaults: `E₁ = 1`, `|Φ₀|² = 10⁵`, `n ≤ 10`, `dt = 10⁻³`, and
    /// `α_{±1} = e^{iπ/4}α`.
    pub fn ring(g_phi0_sq: f64, alpha: f64) -> Self {
        let phi0_sq = 1e5;
        let seed = C64::from_polar(alpha, FRAC_PI_4);
        Self {
            e1: 1.0,
            g: g_phi0_sq / phi0_sq,
            phi0_sq,
            n_max: 10,
            alpha_plus: seed,
            alpha_minus: seed,
            dt: 1e-3,
            backaction: true,
        }
    }

    pub fn g_phi0_sq(&self) -> f64 {
        self.g * self.phi0_sq
    }

    pub fn with_g_phi0_sq(mut self, g_phi0_sq: f64) -> Self {
        self.g = g_phi0_sq / self.phi0_sq;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.e1 > 0.0) || !self.e1.is_finite() {
            return bad(format!("E1 = {} must be positive", self.e1));
        }
        if !(self.phi0_sq > 0.0) || !self.phi0_sq.is_finite() {
            return bad(format!("|Phi0|^2 = {} must be positive", self.phi0_sq));
        }
        if self.n_max < 3 {
            return bad(format!("n_max = {} must be at least 3", self.n_max));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if !self.g.is_finite() {
            return bad(format!("g = {} must be finite", self.g));
        }
        Ok(())
    }

    /// Coherent seed of modes `(n, −n)`.
    fn seeds(&self, n: usize) -> (C64, C64) {
        if n == 1 {
            (self.alpha_plus, self.alpha_minus)
        } else {
            (C64::new(0.0, 0.0), C64::new(0.0, 0.0))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BecState {
    pub phi: C64,
    /// `M_n` for `n = 1..=n_max` at index `n − 1`.
    pub m: Vec<Mat2>,
    pub t: f64,
}

impl BecState {
    pub fn initial(params: &BecParams) -> Self {
        Self {
            phi: C64::new(params.phi0_sq.sqrt(), 0.0),
            m: vec![Mat2::identity(); params.n_max],
            t: 0.0,
        }
    }

    /// Largest `| |A_n|² − |B_n|² − 1 |`.
    pub fn symplectic_defect(&self) -> f64 {
        self.m.iter().map(|m| m.symplectic_defect().abs()).fold(0.0, f64::max)
    }
}

/// `H_n(Φ)`.
pub fn bogoliubov_matrix(n: usize, phi: C64, params: &BecParams) -> Mat2 {
    let delta = (n * n) as f64 * params.e1 - params.g * phi.norm_sqr();
    let kappa = params.g * phi * phi;
    ModelParams::with_complex_kappa(delta, kappa).dynamical_matrix()
}

/// Frozen-condensate model parameters of pair `n`.
pub fn pair_model(n: usize, phi: C64, params: &BecParams) -> ModelParams {
    ModelParams::with_complex_kappa(
        (n * n) as f64 * params.e1 - params.g * phi.norm_sqr(),
        params.g * phi * phi,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMoments {
    /// `⟨ψ_n†ψ_n⟩`
    pub normal_plus: f64,
    /// `⟨ψ_{−n}†ψ_{−n}⟩`
    pub normal_minus: f64,
    /// `⟨ψ_nψ_{−n}⟩`
    pub anomalous: C64,
}

/// Wick moments of `ψ_{±n}(t) = A ψ_{±n}(0) + B ψ_{∓n}†(0)` on a coherent seed.
pub fn pair_moments(m: &Mat2, alpha_n: C64, alpha_minus_n: C64) -> PairMoments {
    let a = m.get(0, 0);
    let b = m.get(0, 1);
    let beta_p = a * alpha_n + b * alpha_minus_n.conj();
    let beta_m = a * alpha_minus_n + b * alpha_n.conj();
    let floor = b.norm_sqr();
    PairMoments {
        normal_plus: beta_p.norm_sqr() + floor,
        normal_minus: beta_m.norm_sqr() + floor,
        anomalous: beta_p * beta_m + a * b,
    }
}

/// `exp(−iHτ)` for a traceless `H` with `H² = s·I`.
fn exp_traceless(h: &Mat2, tau: f64) -> Mat2 {
    let s = (h.get(0, 0) * h.get(0, 0) + h.get(0, 1) * h.get(1, 0)).re;
    let (c, sn) = kernels(s, tau);
    Mat2::identity() * c - h.scale(I * sn)
}

fn phi_rate(phi: C64, m: &[Mat2], params: &BecParams) -> C64 {
    if !params.backaction {
        return C64::new(0.0, 0.0);
    }
    let mut anomalous = C64::new(0.0, 0.0);
    let mut normal = 0.0;
    for (k, mk) in m.iter().enumerate() {
        let (ap, am) = params.seeds(k + 1);
        let pm = pair_moments(mk, ap, am);
        // ⟨ψ_nψ_{−n}⟩ = ⟨ψ_{−n}ψ_n⟩, so the ±n terms double the anomalous sum.
        anomalous += 2.0 * pm.anomalous;
        normal += pm.normal_plus + pm.normal_minus;
    }
    let g = params.g / (2.0 * PI);
    -I * (-I * g * anomalous * phi.conj() - g * normal * phi)
}

/// One integrating-factor RK4 step of length `params.dt`.
pub fn step(state: &BecState, params: &BecParams) -> Result<BecState> {
    let dt = params.dt;
    let h0: Vec<Mat2> = (1..=params.n_max)
        .map(|n| bogoliubov_matrix(n, state.phi, params))
        .collect();
    let e_half: Vec<Mat2> = h0.iter().map(|h| exp_traceless(h, 0.5 * dt)).collect();
    let e_half_inv: Vec<Mat2> = h0.iter().map(|h| exp_traceless(h, -0.5 * dt)).collect();
    let e_full: Vec<Mat2> = h0.iter().map(|h| exp_traceless(h, dt)).collect();
    let e_full_inv: Vec<Mat2> = h0.iter().map(|h| exp_traceless(h, -dt)).collect();

    // With w = E(−τ)M: ẇ = E(−τ)(−i[H(Φ) − H₀])E(τ)w.
    let rhs = |phi: C64, w: &[Mat2], e: Option<(&[Mat2], &[Mat2])>| -> (C64, Vec<Mat2>) {
        let m: Vec<Mat2> = match e {
            Some((ef, _)) => w.iter().zip(ef).map(|(wk, ek)| *ek * *wk).collect(),
            None => w.to_vec(),
        };
        let dphi = phi_rate(phi, &m, params);
        let dw = m
            .iter()
            .enumerate()
            .map(|(k, mk)| {
                let dh = bogoliubov_matrix(k + 1, phi, params) - h0[k];
                let v = (dh * *mk).scale(-I);
                match e {
                    Some((_, ei)) => ei[k] * v,
                    None => v,
                }
            })
            .collect();
        (dphi, dw)
    };
    let axpy = |w: &[Mat2], k: &[Mat2], h: f64| -> Vec<Mat2> { w.iter().zip(k).map(|(a, b)| *a + *b * h).collect() };

    let w0 = &state.m;
    let half = Some((&e_half[..], &e_half_inv[..]));
    let full = Some((&e_full[..], &e_full_inv[..]));
    let (p1, k1) = rhs(state.phi, w0, None);
    let (p2, k2) = rhs(state.phi + p1 * (0.5 * dt), &axpy(w0, &k1, 0.5 * dt), half);
    let (p3, k3) = rhs(state.phi + p2 * (0.5 * dt), &axpy(w0, &k2, 0.5 * dt), half);
    let (p4, k4) = rhs(state.phi + p3 * dt, &axpy(w0, &k3, dt), full);

    let phi = state.phi + (p1 + p2 * 2.0 + p3 * 2.0 + p4) * (dt / 6.0);
    let m: Vec<Mat2> = (0..params.n_max)
        .map(|k| {
            let w = w0[k] + (k1[k] + k2[k] * 2.0 + k3[k] * 2.0 + k4[k]) * (dt / 6.0);
            e_full[k] * w
        })
        .collect();

    let mut worst = 0.0f64;
    for (old, new) in state.m.iter().zip(&m) {
        let d = (new.symplectic_defect() - old.symplectic_defect()).abs();
        worst = if d.is_nan() { f64::INFINITY } else { worst.max(d) };
    }
    if !(worst <= STEP_DEFECT_LIMIT) || !phi.re.is_finite() || !phi.im.is_finite() {
        return Err(Error::StepSize { defect: worst, dt });
    }
    Ok(BecState {
        phi,
        m,
        t: state.t + dt,
    })
}

/// Quadrature means of modes `±1` at `φ = −π/4` in the fixed frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadratures {
    pub x_p1: f64,
    pub p_p1: f64,
    pub x_m1: f64,
    pub p_m1: f64,
}

fn betas(state: &BecState, params: &BecParams) -> (C64, C64) {
    let m = &state.m[0];
    let (a, b) = (m.get(0, 0), m.get(0, 1));
    (
        a * params.alpha_plus + b * params.alpha_minus.conj(),
        a * params.alpha_minus + b * params.alpha_plus.conj(),
    )
}

pub fn quadratures(state: &BecState, params: &BecParams) -> Quadratures {
    let (bp, bm) = betas(state, params);
    let rot = C64::from_polar(1.0, FRAC_PI_4);
    Quadratures {
        x_p1: (rot * bp).re,
        p_p1: (rot * bp).im,
        x_m1: (rot * bm).re,
        p_m1: (rot * bm).im,
    }
}

/// `1 − |Φ(t)|²/|Φ₀|²`.
pub fn depletion(state: &BecState, params: &BecParams) -> f64 {
    1.0 - state.phi.norm_sqr() / params.phi0_sq
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub theta: Vec<f64>,
    pub rho: Vec<f64>,
    pub visibility: f64,
    pub quadratures: Quadratures,
}

/// Normalized density `⟨Ψ†Ψ⟩/|Φ|²` to first order in the `±1` amplitudes.
///
/// The interference term is `2Re[(e^{−iπ/4}Φ)* β_n]`, so the modulation is read
/// against the current condensate phase; while `Φ` stays real this is
/// `1 + 4⟨X₁⟩cos θ/(|Φ|√(2π))`.
pub fn density_profile(state: &BecState, params: &BecParams, theta: &[f64]) -> DensityProfile {
    let (bp, bm) = betas(state, params);
    let amp = state.phi.norm();
    let frame = C64::from_polar(1.0, FRAC_PI_4 - state.phi.arg());
    let pref = 2.0 / (amp * (2.0 * PI).sqrt());
    let rho: Vec<f64> = theta
        .iter()
        .map(|&th| {
            let wave = bp * C64::from_polar(1.0, th) + bm * C64::from_polar(1.0, -th);
            1.0 + pref * (frame * wave).re
        })
        .collect();
    let (lo, hi) = rho.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
        (lo.min(r), hi.max(r))
    });
    let visibility = if rho.is_empty() { 0.0 } else { (hi - lo) / (hi + lo) };
    DensityProfile {
        theta: theta.to_vec(),
        rho,
        visibility,
        quadratures: quadratures(state, params),
    }
}

/// Uniform grid of `n` angles on `[0, 2π)`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

/// Squeezing factor `|A_n| + |B_n|` of every pair.
pub fn squeezing_factors(state: &BecState) -> Vec<f64> {
    state
        .m
        .iter()
        .map(|m| m.get(0, 0).norm() + m.get(0, 1).norm())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BecSample {
    pub t: f64,
    pub phi: C64,
    pub s_n: Vec<f64>,
    pub quadratures: Quadratures,
    pub depletion: f64,
    pub visibility: f64,
}

fn sample(state: &BecState, params: &BecParams, theta: &[f64]) -> BecSample {
    BecSample {
        t: state.t,
        phi: state.phi,
        s_n: squeezing_factors(state),
        quadratures: quadratures(state, params),
        depletion: depletion(state, params),
        visibility: density_profile(state, params, theta).visibility,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BecRun {
    pub samples: Vec<BecSample>,
    pub final_state: BecState,
    /// Step actually used after any halving.
    pub dt: f64,
}

const VISIBILITY_GRID: usize = 360;

/// Integrate to `t_end`, recording a sample every `sample_every` (rounded to whole
/// steps; `None` records only the end points). Halves `dt` on a step-size error.
pub fn evolve(params: &BecParams, t_end: f64, sample_every: Option<f64>) -> Result<BecRun> {
    params.validate()?;
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t_end = {t_end} must be finite and non-negative"
        )));
    }
    let theta = theta_grid(VISIBILITY_GRID);
    let mut p = *params;
    for _ in 0..=MAX_HALVINGS {
        match run_fixed(&p, t_end, sample_every, &theta) {
            Err(Error::StepSize { defect, dt }) => {
                log::debug!("step defect {defect:.3e} at dt = {dt:.3e}; halving");
                p.dt *= 0.5;
            }
            other => return other,
        }
    }
    Err(Error::StepSize {
        defect: f64::NAN,
        dt: p.dt,
    })
}

fn run_fixed(p: &BecParams, t_end: f64, sample_every: Option<f64>, theta: &[f64]) -> Result<BecRun> {
    let steps = (t_end / p.dt).round() as usize;
    let dt = if steps == 0 { p.dt } else { t_end / steps as f64 };
    let p = BecParams { dt, ..*p };
    let stride = sample_every
        .map(|s| ((s / dt).round() as usize).max(1))
        .unwrap_or(steps.max(1));
    let mut state = BecState::initial(&p);
    let mut samples = vec![sample(&state, &p, theta)];
    for k in 1..=steps {
        state = step(&state, &p)?;
        if k % stride == 0 || k == steps {
            samples.push(sample(&state, &p, theta));
        }
    }
    Ok(BecRun {
        samples,
        final_state: state,
        dt,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// `gΦ₀²` in units of `E₁`.
    pub g: f64,
    pub x: f64,
    /// `∂⟨X₊₁⟩/∂(gΦ₀²)` in units of `1/E₁`, by finite differences on the grid.
    pub chi_g: f64,
    pub visibility: f64,
    pub max_depletion: f64,
    /// Grid point at or beyond the `n = 1` exceptional point `gΦ₀² = E₁/2`.
    pub flagged: bool,
}

/// Quadrature, visibility and susceptibility at time `t` over a grid of `gΦ₀²` values.
pub fn sensing_sweep(base: &BecParams, g_phi0_sq: &[f64], t: f64) -> Result<Vec<SweepRow>> {
    if g_phi0_sq.is_empty() {
        return Err(Error::InvalidParameter("empty g grid".into()));
    }
    if g_phi0_sq.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("g grid must be strictly increasing".into()));
    }
    let sample_every = Some(0.05 * base.e1.recip());
    let runs: Vec<Result<(f64, f64, f64)>> = g_phi0_sq
        .par_iter()
        .map(|&gp| {
            let p = base.with_g_phi0_sq(gp);
            let run = evolve(&p, t, sample_every)?;
            let last = run.samples.last().expect("run has samples");
            let max_dep = run.samples.iter().map(|s| s.depletion.abs()).fold(0.0, f64::max);
            Ok((last.quadratures.x_p1, last.visibility, max_dep))
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let chi = finite_difference(g_phi0_sq, &xs);
    Ok(g_phi0_sq
        .iter()
        .zip(&runs)
        .zip(chi)
        .map(|((&g, &(x, visibility, max_depletion)), chi_g)| SweepRow {
            g,
            x,
            chi_g,
            visibility,
            max_depletion,
            flagged: g >= 0.5 * base.e1,
        })
        .collect())
}

/// Derivative on a non-uniform grid: three-point centered inside, one-sided at the ends.
pub fn finite_difference(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            if i == 0 {
                (y[1] - y[0]) / (x[1] - x[0])
            } else if i == n - 1 {
                (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2])
            } else {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                (h0 * h0 * y[i + 1] - h1 * h1 * y[i - 1] + (h1 * h1 - h0 * h0) * y[i]) / (h0 * h1 * (h0 + h1))
            }
        })
        .collect()
}

/// Squeezing of pair `n` for a frozen condensate, for comparison with [`squeezing_factors`].
pub fn frozen_squeezing(n: usize, params: &BecParams, t: f64) -> Result<f64> {
    let phi = C64::new(params.phi0_sq.sqrt(), 0.0);
    Ok(squeeze_summary(&pair_model(n, phi, params), t)?.squeezing)
}

#[cfg(test)]
mod invariants;
