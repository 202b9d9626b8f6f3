//! Closed-form dynamics of the two-mode pair-coupled model
//!
//! ```text
//! H = δ (a₁†a₁ + a₂†a₂) + i (κ a₁†a₂† − κ* a₁a₂)
//! ```
//!
//! In the Heisenberg picture the pair `(a₁, a₂†)` obeys `i∂ₜv = D v` with the
//! non-Hermitian dynamical matrix `D = [[δ, iκ], [iκ*, −δ]]`. Because
//! `D² = (δ² − |κ|²)·I`, the propagator is `c·I − i·sn·D` where `c` and `sn` are
//! the even and odd kernels of `s = δ² − |κ|²`:
//!
//! * `s > 0` (broken): `c = cos(λ₀t)`, `sn = sin(λ₀t)/λ₀`
//! * `s < 0` (symmetric): `c = cosh(λ₀t)`, `sn = sinh(λ₀t)/λ₀`
//! * `s = 0` (exceptional point): `c = 1`, `sn = t`
//!
//! The kernels are evaluated through one power series in `s·t²` when that product
//! is small, so nothing here branches on [`Regime`] and the coefficients stay
//! continuous through the exceptional point.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default relative tolerance for regime classification.
pub const DEFAULT_REGIME_TOL: f64 = 1e-12;

/// Kernels switch to the power series below this value of `|s|·t²`.
const SERIES_LIMIT: f64 = 1.0;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Detuning `delta` and pair coupling `kappa` (angular-frequency units, ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub delta: f64,
    pub kappa: C64,
}

impl ModelParams {
    /// Real coupling, as in the optical realization.
    pub fn new(delta: f64, kappa: f64) -> Self {
        Self {
            delta,
            kappa: C64::new(kappa, 0.0),
        }
    }

    pub fn with_complex_kappa(delta: f64, kappa: C64) -> Self {
        Self { delta, kappa }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delta.is_finite() || !self.kappa.re.is_finite() || !self.kappa.im.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "non-finite model parameters: delta = {}, kappa = {}",
                self.delta, self.kappa
            )));
        }
        Ok(())
    }

    /// `s = δ² − |κ|²`, factored to keep precision near the exceptional point.
    pub fn discriminant(&self) -> f64 {
        let d = self.delta.abs();
        let k = self.kappa.norm();
        (d - k) * (d + k)
    }

    /// The dynamical matrix `[[δ, iκ], [iκ*, −δ]]`.
    pub fn dynamical_matrix(&self) -> Mat2 {
        Mat2::new(
            C64::new(self.delta, 0.0),
            I * self.kappa,
            I * self.kappa.conj(),
            C64::new(-self.delta, 0.0),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `|δ| > |κ|`: real eigenvalues, oscillating squeezing.
    Broken,
    /// `|κ| = |δ|`: coalescing eigenvalues and eigenvectors.
    ExceptionalPoint,
    /// `|κ| > |δ|`: imaginary eigenvalues, exponential squeezing.
    Symmetric,
}

/// Classify the regime with relative tolerance `tol` on `| |κ| − |δ| |`.
pub fn classify_regime(params: &ModelParams, tol: f64) -> Result<Regime> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::InvalidTolerance(tol));
    }
    params.validate()?;
    let d = params.delta.abs();
    let k = params.kappa.norm();
    if d == 0.0 && k == 0.0 {
        return Err(Error::DegenerateParams);
    }
    let gap = k - d;
    Ok(if gap.abs() <= tol * d.max(k) {
        Regime::ExceptionalPoint
    } else if gap < 0.0 {
        Regime::Broken
    } else {
        Regime::Symmetric
    })
}

/// `λ₀ = sqrt(|δ² − |κ|²|)`, zero at the exceptional point.
pub fn lambda0(params: &ModelParams) -> f64 {
    params.discriminant().abs().sqrt()
}

/// Even and odd propagator kernels `(c, sn)` for `D² = s·I`.
pub(crate) fn kernels(s: f64, t: f64) -> (f64, f64) {
    let x = -s * t * t;
    if x.abs() < SERIES_LIMIT {
        let (mut c, mut sn) = (1.0, 1.0);
        let (mut tc, mut ts) = (1.0, 1.0);
        for k in 1..40 {
            let k = k as f64;
            tc *= x / ((2.0 * k - 1.0) * (2.0 * k));
            ts *= x / ((2.0 * k) * (2.0 * k + 1.0));
            c += tc;
            sn += ts;
            if tc.abs() < 1e-18 && ts.abs() < 1e-18 {
                break;
            }
        }
        (c, sn * t)
    } else if s > 0.0 {
        let l = s.sqrt();
        ((l * t).cos(), (l * t).sin() / l)
    } else {
        let l = (-s).sqrt();
        ((l * t).cosh(), (l * t).sinh() / l)
    }
}

/// Derivatives `(∂c/∂s, ∂sn/∂s)` of the kernels at fixed `t`.
pub(crate) fn kernel_derivatives(s: f64, t: f64) -> (f64, f64) {
    let (c, sn) = kernels(s, t);
    let dc = -0.5 * t * sn;
    let x = -s * t * t;
    let dsn = if x.abs() < SERIES_LIMIT {
        // -t³ Σ_{k≥1} k x^{k-1} / (2k+1)!
        let mut sum = 0.0;
        let mut pow = 1.0; // x^{k-1}
        let mut fact = 6.0; // (2k+1)!
        for k in 1..40 {
            let kf = k as f64;
            let term = kf * pow / fact;
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > 2 {
                break;
            }
            pow *= x;
            fact *= (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
        }
        -t * t * t * sum
    } else {
        (t * c - sn) / (2.0 * s)
    };
    (dc, dsn)
}

/// Transfer coefficients of `a_j(t) = A a_j(0) + B a_ĵ†(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferCoeffs {
    pub a: C64,
    pub b: C64,
}

impl TransferCoeffs {
    pub fn a0(&self) -> f64 {
        self.a.norm()
    }

    pub fn b0(&self) -> f64 {
        self.b.norm()
    }

    pub fn phi_a(&self) -> f64 {
        self.a.arg()
    }

    pub fn phi_b(&self) -> f64 {
        self.b.arg()
    }

    /// `[[A, B], [B*, A*]]`.
    pub fn matrix(&self) -> Mat2 {
        Mat2::transfer(self.a, self.b)
    }

    /// `|A|² − |B|² − 1`.
    pub fn symplectic_defect(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr() - 1.0
    }
}

/// Closed-form `A(t)`, `B(t)`; valid for any finite `t`, including negative times.
pub fn transfer_coeffs(params: &ModelParams, t: f64) -> TransferCoeffs {
    let (c, sn) = kernels(params.discriminant(), t);
    TransferCoeffs {
        a: C64::new(c, -params.delta * sn),
        b: params.kappa * sn,
    }
}

/// Biorthogonal eigensystem of the dynamical matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem {
    pub lambda_plus: C64,
    pub lambda_minus: C64,
    /// Right eigenvectors `R₊`, `R₋`.
    pub right: [[C64; 2]; 2],
    /// Left eigenvectors `L₊`, `L₋` normalized so that `⟨L_s|R_s'⟩ = δ_ss'`.
    pub left: [[C64; 2]; 2],
}

impl Eigensystem {
    pub fn eigenvalues(&self) -> [C64; 2] {
        [self.lambda_plus, self.lambda_minus]
    }

    /// `Σ_s |R_s⟩ e^{−iλ_s t} ⟨L_s|`.
    pub fn propagator(&self, t: f64) -> Mat2 {
        let mut out = Mat2::ZERO;
        for (s, lambda) in self.eigenvalues().into_iter().enumerate() {
            let phase = (-I * lambda * t).exp();
            let r = self.right[s];
            let l = self.left[s];
            let proj = Mat2::new(
                r[0] * l[0].conj(),
                r[0] * l[1].conj(),
                r[1] * l[0].conj(),
                r[1] * l[1].conj(),
            );
            out = out + proj.scale(phase);
        }
        out
    }
}

pub fn eigensystem(params: &ModelParams) -> Result<Eigensystem> {
    let regime = classify_regime(params, DEFAULT_REGIME_TOL)?;
    let l0 = lambda0(params);
    let (lp, lm) = match regime {
        Regime::ExceptionalPoint => return Err(Error::Coalescence),
        Regime::Broken => (C64::new(l0, 0.0), C64::new(-l0, 0.0)),
        Regime::Symmetric => (C64::new(0.0, l0), C64::new(0.0, -l0)),
    };
    let delta = C64::new(params.delta, 0.0);
    let kappa = params.kappa;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);

    if kappa.norm() == 0.0 {
        // Decoupled modes: D = diag(δ, −δ) and λ₊ = |δ|.
        let (rp, rm) = if params.delta > 0.0 {
            ([one, zero], [zero, one])
        } else {
            ([zero, one], [one, zero])
        };
        return Ok(Eigensystem {
            lambda_plus: lp,
            lambda_minus: lm,
            right: [rp, rm],
            left: [rp, rm],
        });
    }

    let build = |lambda: C64| -> ([C64; 2], [C64; 2]) {
        let right = [I * kappa, lambda - delta];
        // Row dual (λ + δ, iκ) / (2iκλ); stored as a column via conjugation.
        let norm = 2.0 * I * kappa * lambda;
        let dual = [(lambda + delta) / norm, I * kappa / norm];
        (right, [dual[0].conj(), dual[1].conj()])
    };
    let (rp, lpv) = build(lp);
    let (rm, lmv) = build(lm);
    Ok(Eigensystem {
        lambda_plus: lp,
        lambda_minus: lm,
        right: [rp, rm],
        left: [lpv, lmv],
    })
}

/// Two-mode squeezing factor and angles at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeSummary {
    /// `S = |A| + |B| ≥ 1`.
    pub squeezing: f64,
    pub phi_plus: f64,
    pub phi_minus: f64,
    /// Oscillation period `π/λ₀`, broken regime only.
    pub period: Option<f64>,
    /// `sqrt((|δ|+|κ|)/(|δ|−|κ|))`, broken regime only.
    pub s_max: Option<f64>,
}

/// Wrap an angle into (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y <= -PI {
        y += 2.0 * PI;
    } else if y > PI {
        y -= 2.0 * PI;
    }
    y
}

pub fn squeeze_summary(params: &ModelParams, t: f64) -> Result<SqueezeSummary> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "squeeze summary needs t >= 0, got {t}"
        )));
    }
    let regime = classify_regime(params, DEFAULT_REGIME_TOL)?;
    let coeffs = transfer_coeffs(params, t);
    let (phi_a, phi_b) = if coeffs.b.norm() > 0.0 {
        (coeffs.phi_a(), coeffs.phi_b())
    } else {
        one_sided_phases(params, t)
    };
    let (period, s_max) = match regime {
        Regime::Broken => {
            let d = params.delta.abs();
            let k = params.kappa.norm();
            (Some(PI / lambda0(params)), Some(((d + k) / (d - k)).sqrt()))
        }
        _ => (None, None),
    };
    Ok(SqueezeSummary {
        squeezing: coeffs.a0() + coeffs.b0(),
        phi_plus: wrap_angle(0.5 * (phi_b + phi_a)),
        phi_minus: wrap_angle(0.5 * (phi_b - phi_a)),
        period,
        s_max,
    })
}

/// Phases of `A` and `B` when `B = 0`, taken as one-sided limits.
///
/// At `t = 0` squeezing is about to grow, so the right limit is used and
/// `φ₊ = ½Arg κ`. At a later zero of `B` squeezing has just returned to 1 and the
/// left limit is used, which gives `φ₊ = ½Arg(−κ)` on the first return.
fn one_sided_phases(params: &ModelParams, t: f64) -> (f64, f64) {
    let kappa = params.kappa;
    if kappa.norm() == 0.0 {
        return (transfer_coeffs(params, t).phi_a(), 0.0);
    }
    if t == 0.0 {
        return (0.0, kappa.arg());
    }
    let (c, _) = kernels(params.discriminant(), t);
    // Just before t: sn ≈ −ε·c, so B ≈ −κ·c·ε and A ≈ c·(1 + iδε).
    let phi_b = (-kappa * c).arg();
    let phi_a = if c > 0.0 {
        0.0
    } else if params.delta > 0.0 {
        -PI
    } else {
        PI
    };
    (phi_a, phi_b)
}

/// Initial coherent amplitudes of the two modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentPair {
    pub alpha1: C64,
    pub alpha2: C64,
}

impl CoherentPair {
    pub fn new(alpha1: C64, alpha2: C64) -> Self {
        Self { alpha1, alpha2 }
    }

    /// The sensing convention `α₁ = iα`, `α₂ = α` with real `α`.
    pub fn sensing(alpha: f64) -> Self {
        Self {
            alpha1: C64::new(0.0, alpha),
            alpha2: C64::new(alpha, 0.0),
        }
    }

    /// The sensing convention with `α = 2·sign(δ)`.
    pub fn sensing_default(params: &ModelParams) -> Self {
        Self::sensing(2.0 * params.delta.signum())
    }

    pub fn get(&self, mode: Mode) -> C64 {
        match mode {
            Mode::First => self.alpha1,
            Mode::Second => self.alpha2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    First,
    Second,
}

impl Mode {
    pub fn other(self) -> Mode {
        match self {
            Mode::First => Mode::Second,
            Mode::Second => Mode::First,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureStats {
    pub mean: f64,
    pub variance: f64,
}

/// `⟨X_j(φ, t)⟩ = Re[e^{−iφ}(A α_j + B α_ĵ*)]`.
pub fn quadrature_mean(params: &ModelParams, t: f64, alphas: &CoherentPair, phi: f64, mode: Mode) -> f64 {
    let c = transfer_coeffs(params, t);
    let amp = c.a * alphas.get(mode) + c.b * alphas.get(mode.other()).conj();
    (C64::from_polar(1.0, -phi) * amp).re
}

/// `(|A|² + |B|²)/4`, independent of the quadrature angle and the coherent amplitudes.
pub fn quadrature_variance(params: &ModelParams, t: f64) -> f64 {
    let c = transfer_coeffs(params, t);
    0.25 * (c.a.norm_sqr() + c.b.norm_sqr())
}

pub fn quadrature_stats(params: &ModelParams, t: f64, alphas: &CoherentPair, phi: f64, mode: Mode) -> QuadratureStats {
    QuadratureStats {
        mean: quadrature_mean(params, t, alphas, phi, mode),
        variance: quadrature_variance(params, t),
    }
}

/// Pair parameter `q` of the stationary state `sqrt(1−|q|²) Σ qⁿ |n, n⟩`.
///
/// `q` is the root of `iκ* q² − 2δ q − iκ = 0` with `|q| < 1`, namely
/// `q = −i(δ − sign(δ)λ₀)/κ*`. For `δ > 0` this is the ground state; for `δ < 0`
/// the spectrum is bounded above instead and the same state is the ceiling.
pub fn ground_state_param(params: &ModelParams) -> Result<C64> {
    let regime = classify_regime(params, DEFAULT_REGIME_TOL)?;
    if regime != Regime::Broken || params.kappa.norm() == 0.0 {
        return Err(Error::NoGroundState);
    }
    let l0 = lambda0(params);
    let num = params.delta - params.delta.signum() * l0;
    Ok(-I * num / params.kappa.conj())
}

#[cfg(test)]
mod invariants;
