//! Time stepping of `i∂ₜψ = Hψ` for a time-independent sparse Hermitian `H`.

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Propagator choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Propagator {
    /// Chebyshev expansion of `exp(−iHΔ)`; each substep spans at most
    /// `max_phase` in units of the spectral half-width.
    Chebyshev { max_phase: f64 },
    /// Classical RK4 with step `h` chosen so that `(h‖H‖)⁵/120 ≤ local_error`.
    Rk4 { local_error: f64 },
}

impl Default for Propagator {
    fn default() -> Self {
        Propagator::Chebyshev { max_phase: 200.0 }
    }
}

/// Bessel functions `J_0..=J_kmax` at `x ≥ 0` by Miller's backward recurrence.
pub(crate) fn bessel_j_seq(x: f64, kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = {
        let m = kmax.max(x.ceil() as usize) + 30 + (x.sqrt() * 10.0) as usize;
        m + (m % 2)
    };
    let mut j_next = 0.0;
    let mut j_cur = 1e-300;
    let mut norm = 0.0;
    let mut vals = vec![0.0; start + 1];
    vals[start] = j_cur;
    for k in (1..=start).rev() {
        let j_prev = 2.0 * k as f64 / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        vals[k - 1] = j_cur;
        if j_cur.abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
            j_cur *= 1e-250;
            j_next *= 1e-250;
        }
    }
    // J₀ + 2 Σ J_{2k} = 1
    for (k, v) in vals.iter().enumerate() {
        if k == 0 {
            norm += v;
        } else if k % 2 == 0 {
            norm += 2.0 * v;
        }
    }
    for k in 0..=kmax {
        out[k] = vals[k] / norm;
    }
    out
}

/// Apply `exp(−iHΔ)` with a Chebyshev series over the enclosure `[b − a, b + a]`.
fn chebyshev_step(h: &CsrMatrix, psi: &mut [C64], dt: f64, center: f64, half_width: f64, work: &mut ChebWork) {
    let x = half_width * dt.abs();
    let kmax = (x + 10.0 * x.cbrt() + 30.0).ceil() as usize;
    let jk = bessel_j_seq(x, kmax);
    let n = psi.len();
    let sign = dt.signum();
    let ChebWork {
        t_prev,
        t_cur,
        t_next,
        acc,
    } = work;
    let scaled = |src: &[C64], dst: &mut [C64]| {
        h.matvec(src, dst);
        for (d, s) in dst.iter_mut().zip(src) {
            *d = (*d - center * s) / half_width;
        }
    };
    // c_k = 2(−i)^k J_k(aΔ); time reversal conjugates the phase factor.
    let coef = |k: usize| -> C64 {
        let phase = match k % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, -sign),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, sign),
        };
        phase * (if k == 0 { jk[0] } else { 2.0 * jk[k] })
    };
    t_prev[..n].copy_from_slice(psi);
    scaled(&t_prev[..n], &mut t_cur[..n]);
    let c0 = coef(0);
    let c1 = coef(1);
    for i in 0..n {
        acc[i] = c0 * t_prev[i] + c1 * t_cur[i];
    }
    for k in 2..=kmax {
        scaled(&t_cur[..n], &mut t_next[..n]);
        let ck = coef(k);
        for i in 0..n {
            t_next[i] = 2.0 * t_next[i] - t_prev[i];
            acc[i] += ck * t_next[i];
        }
        std::mem::swap(t_prev, t_cur);
        std::mem::swap(t_cur, t_next);
        if jk[k].abs() < 1e-17 && k as f64 > x {
            break;
        }
    }
    let global = C64::from_polar(1.0, -center * dt);
    for (p, a) in psi.iter_mut().zip(acc.iter()) {
        *p = global * a;
    }
}

struct ChebWork {
    t_prev: Vec<C64>,
    t_cur: Vec<C64>,
    t_next: Vec<C64>,
    acc: Vec<C64>,
}

impl ChebWork {
    fn new(n: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); n];
        Self {
            t_prev: z.clone(),
            t_cur: z.clone(),
            t_next: z.clone(),
            acc: z,
        }
    }
}

fn rk4_step(h: &CsrMatrix, psi: &mut [C64], dt: f64, k: &mut [Vec<C64>; 5]) {
    let n = psi.len();
    let minus_i_dt = C64::new(0.0, -dt);
    let [k1, k2, k3, k4, tmp] = k;
    h.matvec(psi, k1);
    k1.iter_mut().for_each(|v| *v *= minus_i_dt);
    for i in 0..n {
        tmp[i] = psi[i] + 0.5 * k1[i];
    }
    h.matvec(tmp, k2);
    k2.iter_mut().for_each(|v| *v *= minus_i_dt);
    for i in 0..n {
        tmp[i] = psi[i] + 0.5 * k2[i];
    }
    h.matvec(tmp, k3);
    k3.iter_mut().for_each(|v| *v *= minus_i_dt);
    for i in 0..n {
        tmp[i] = psi[i] + k3[i];
    }
    h.matvec(tmp, k4);
    k4.iter_mut().for_each(|v| *v *= minus_i_dt);
    for i in 0..n {
        psi[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
    }
}

/// Reusable propagator bound to one Hamiltonian.
pub struct Stepper<'a> {
    h: &'a CsrMatrix,
    method: Propagator,
    center: f64,
    half_width: f64,
    norm_bound: f64,
}

impl<'a> Stepper<'a> {
    pub fn new(h: &'a CsrMatrix, method: Propagator) -> Result<Self> {
        match method {
            Propagator::Chebyshev { max_phase } if !(max_phase > 0.0) => {
                return Err(Error::StepControl(format!(
                    "Chebyshev phase limit {max_phase} must be positive"
                )))
            }
            Propagator::Rk4 { local_error } if !(local_error > 0.0 && local_error < 1.0) => {
                return Err(Error::StepControl(format!(
                    "RK4 local error {local_error} outside (0, 1)"
                )))
            }
            _ => {}
        }
        let (lo, hi) = h.spectral_bounds();
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::StepControl("non-finite spectral bounds".into()));
        }
        let center = 0.5 * (lo + hi);
        let half_width = 0.5 * (hi - lo) * 1.01 + 1e-12;
        Ok(Self {
            h,
            method,
            center,
            half_width,
            norm_bound: lo.abs().max(hi.abs()).max(1e-12),
        })
    }

    /// Advance `psi` by `dt` (negative allowed).
    pub fn advance(&self, psi: &mut [C64], dt: f64) -> Result<()> {
        if dt == 0.0 {
            return Ok(());
        }
        if !dt.is_finite() {
            return Err(Error::StepControl(format!("non-finite step {dt}")));
        }
        match self.method {
            Propagator::Chebyshev { max_phase } => {
                let pieces = (self.half_width * dt.abs() / max_phase).ceil().max(1.0) as usize;
                let sub = dt / pieces as f64;
                let mut work = ChebWork::new(psi.len());
                for _ in 0..pieces {
                    chebyshev_step(self.h, psi, sub, self.center, self.half_width, &mut work);
                }
            }
            Propagator::Rk4 { local_error } => {
                let h_max = (120.0 * local_error).powf(0.2) / self.norm_bound;
                let steps = (dt.abs() / h_max).ceil().max(1.0);
                if steps > 1e10 {
                    return Err(Error::StepControl(format!("{steps:.3e} RK4 steps requested")));
                }
                let steps = steps as usize;
                let sub = dt / steps as f64;
                let n = psi.len();
                let mut k = std::array::from_fn(|_| vec![C64::new(0.0, 0.0); n]);
                for _ in 0..steps {
                    rk4_step(self.h, psi, sub, &mut k);
                }
            }
        }
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::StepControl("state became non-finite".into()));
        }
        Ok(())
    }
}
