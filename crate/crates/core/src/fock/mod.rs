//! Truncated Fock-space oracle for the two-mode model with an optional Kerr term.
//!
//! The pair term conserves `n₁ − n₂`, so vacuum-seeded runs live in the
//! tridiagonal `c = 0` sector and cutoffs in the thousands stay cheap.

pub mod basis;
pub mod propagate;
pub mod sparse;

pub use basis::FockBasis;
pub use propagate::{Propagator, Stepper};
pub use sparse::{build_hamiltonian, CsrMatrix, KerrParams};

use crate::dynamics::wrap_angle;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Tail mass allowed when a state is cut at the basis edge.
pub const TAIL_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub basis: FockBasis,
    pub amps: Vec<C64>,
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Vacuum,
    Coherent {
        alpha1: C64,
        alpha2: C64,
    },
    /// `sqrt(1 − |q|²) Σ qⁿ |n, n⟩`.
    PairSqueezed {
        q: C64,
    },
}

/// Single-mode coherent amplitudes `e^{−|α|²/2} αⁿ/√n!` for `n ≤ cutoff` and the
/// probability mass above the cutoff.
fn coherent_ladder(alpha: C64, cutoff: usize) -> (Vec<C64>, f64) {
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    amps.push(c);
    for n in 1..=cutoff {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    // Sum the tail directly; 1 − Σ loses everything below 1e-16.
    let mut tail = 0.0;
    let mut p = c.norm_sqr();
    let mut n = cutoff;
    loop {
        n += 1;
        p *= alpha.norm_sqr() / n as f64;
        tail += p;
        if p < 1e-30 * tail.max(1e-300) || (n > cutoff + 10 && p == 0.0) || n > cutoff + 100_000 {
            break;
        }
    }
    (amps, tail)
}

pub fn prepare_state(basis: &FockBasis, kind: StateKind) -> Result<FockState> {
    let mut amps = vec![C64::new(0.0, 0.0); basis.dim()];
    match kind {
        StateKind::Vacuum => {
            let i = basis
                .index(0, 0)
                .ok_or_else(|| Error::InvalidBasis("vacuum lies outside this sector".into()))?;
            amps[i] = C64::new(1.0, 0.0);
        }
        StateKind::Coherent { alpha1, alpha2 } => {
            if basis.sector_index().is_some() {
                return Err(Error::InvalidBasis("coherent states need the full basis".into()));
            }
            let (n1, n2) = basis.cutoffs();
            let (c1, t1) = coherent_ladder(alpha1, n1);
            let (c2, t2) = coherent_ladder(alpha2, n2);
            let tail = t1 + t2;
            if tail > TAIL_LIMIT {
                return Err(Error::CutoffTooSmall {
                    tail,
                    limit: TAIL_LIMIT,
                });
            }
            for (i, a) in amps.iter_mut().enumerate() {
                let (m1, m2) = basis.state(i);
                *a = c1[m1] * c2[m2];
            }
            normalize(&mut amps);
        }
        StateKind::PairSqueezed { q } => {
            if !(q.norm() < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "pair parameter |q| = {} must be < 1",
                    q.norm()
                )));
            }
            if basis.sector_index().is_some_and(|c| c != 0) {
                return Err(Error::InvalidBasis("pair states live in the n1 = n2 sector".into()));
            }
            let (n1, n2) = basis.cutoffs();
            let top = n1.min(n2);
            let tail = q.norm_sqr().powi(top as i32 + 1);
            if tail > TAIL_LIMIT {
                return Err(Error::CutoffTooSmall {
                    tail,
                    limit: TAIL_LIMIT,
                });
            }
            let mut c = C64::new((1.0 - q.norm_sqr()).sqrt(), 0.0);
            for n in 0..=top {
                amps[basis.index(n, n).expect("pair state inside basis")] = c;
                c *= q;
            }
            normalize(&mut amps);
        }
    }
    Ok(FockState {
        basis: *basis,
        amps,
        time: 0.0,
    })
}

fn normalize(amps: &mut [C64]) {
    let n = norm_sqr(amps).sqrt();
    amps.iter_mut().for_each(|a| *a /= n);
}

fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

impl FockState {
    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    /// Amplitude of `|n₁, n₂⟩`, zero outside the basis.
    pub fn amplitude(&self, n1: usize, n2: usize) -> C64 {
        self.basis.index(n1, n2).map(|i| self.amps[i]).unwrap_or_default()
    }

    /// Population of the top 5% of either mode ladder.
    pub fn top_population(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let (n1, n2) = self.basis.state(*i);
                self.basis.is_top(n1, n2)
            })
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// `⟨ψ|O|ψ⟩` for an operator mapping `|n₁,n₂⟩` to `coef·|n₁′,n₂′⟩`.
    fn expect(&self, op: impl Fn(usize, usize) -> Option<(usize, usize, f64)>) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let (n1, n2) = self.basis.state(i);
            if let Some((m1, m2, coef)) = op(n1, n2) {
                acc += self.amplitude(m1, m2).conj() * a * coef;
            }
        }
        acc
    }
}

/// First and second moments of the two modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    /// `⟨a_j⟩`
    pub mean: [C64; 2],
    /// `⟨a_i a_j⟩`
    pub pair: [[C64; 2]; 2],
    /// `⟨a_i† a_j⟩`
    pub number: [[C64; 2]; 2],
}

impl MomentTable {
    pub fn vacuum() -> Self {
        let z = C64::new(0.0, 0.0);
        Self {
            mean: [z; 2],
            pair: [[z; 2]; 2],
            number: [[z; 2]; 2],
        }
    }

    /// Moments of `a_j − ⟨a_j⟩`.
    pub fn central(&self) -> Self {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.pair[i][j] -= self.mean[i] * self.mean[j];
                out.number[i][j] -= self.mean[i].conj() * self.mean[j];
            }
        }
        out.mean = [C64::new(0.0, 0.0); 2];
        out
    }
}

fn lower(mode: usize, n1: usize, n2: usize) -> Option<(usize, usize, f64)> {
    match mode {
        0 if n1 > 0 => Some((n1 - 1, n2, (n1 as f64).sqrt())),
        1 if n2 > 0 => Some((n1, n2 - 1, (n2 as f64).sqrt())),
        _ => None,
    }
}

fn raise(mode: usize, n1: usize, n2: usize) -> (usize, usize, f64) {
    match mode {
        0 => (n1 + 1, n2, (n1 as f64 + 1.0).sqrt()),
        _ => (n1, n2 + 1, (n2 as f64 + 1.0).sqrt()),
    }
}

pub fn moments(state: &FockState) -> MomentTable {
    let mut m = MomentTable::vacuum();
    for j in 0..2 {
        m.mean[j] = state.expect(|n1, n2| lower(j, n1, n2));
        for i in 0..2 {
            m.pair[i][j] = state.expect(|n1, n2| {
                let (a1, a2, c1) = lower(j, n1, n2)?;
                let (b1, b2, c2) = lower(i, a1, a2)?;
                Some((b1, b2, c1 * c2))
            });
            m.number[i][j] = state.expect(|n1, n2| {
                let (a1, a2, c1) = lower(j, n1, n2)?;
                let (b1, b2, c2) = raise(i, a1, a2);
                Some((b1, b2, c1 * c2))
            });
        }
    }
    m
}

/// Squeezing factor from the variances of `X₁(φ) ± X₂(φ)`.
///
/// With `b = a₁ ± a₂` (central), `Var = ½[⟨b†b⟩ + 1 + Re(e^{−2iφ}⟨bb⟩)]`, so the
/// extremes over `φ` are `½(⟨b†b⟩ + 1 ± |⟨bb⟩|)`. Returns
/// `S = (V_max/V_min)^{1/4}` and the angle of the squeezed combination.
pub fn squeeze_factor_from_moments(m: &MomentTable) -> Result<(f64, f64)> {
    let c = m.central();
    let mut v_max = f64::NEG_INFINITY;
    let mut v_min = f64::INFINITY;
    let mut phi_opt = 0.0;
    for sign in [1.0, -1.0] {
        let nb = c.number[0][0].re + c.number[1][1].re + 2.0 * sign * c.number[0][1].re;
        let bb = c.pair[0][0] + c.pair[1][1] + 2.0 * sign * c.pair[0][1];
        let hi = 0.5 * (nb + 1.0 + bb.norm());
        let lo = 0.5 * (nb + 1.0 - bb.norm());
        v_max = v_max.max(hi);
        if lo < v_min {
            v_min = lo;
            phi_opt = wrap_angle(0.5 * bb.arg() + 0.5 * std::f64::consts::PI);
        }
    }
    if !(v_min > 0.0) {
        return Err(Error::NonPhysicalMoments(v_min));
    }
    Ok(((v_max / v_min).powf(0.25), phi_opt))
}

/// `|⟨a|b⟩|²` for states on the same basis.
pub fn fidelity(a: &FockState, b: &FockState) -> Result<f64> {
    if a.basis != b.basis {
        return Err(Error::InvalidBasis("fidelity needs states on the same basis".into()));
    }
    let overlap: C64 = a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum();
    Ok(overlap.norm_sqr())
}

/// `⟨ψ|H|ψ⟩`.
pub fn energy(h: &CsrMatrix, state: &FockState) -> f64 {
    let mut hv = vec![C64::new(0.0, 0.0); state.amps.len()];
    h.matvec(&state.amps, &mut hv);
    state.amps.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
}

/// What to do when the top of the ladder becomes populated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SaturationPolicy {
    #[default]
    Fail,
    /// Stop the trace at the last valid sample.
    Truncate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    pub propagator: Propagator,
    pub norm_tol: f64,
    pub top_tol: f64,
    pub saturation: SaturationPolicy,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            propagator: Propagator::default(),
            norm_tol: 1e-9,
            top_tol: 1e-8,
            saturation: SaturationPolicy::Fail,
        }
    }
}

fn check_health(state: &FockState, norm0: f64, opts: &EvolveOptions) -> Result<(f64, f64)> {
    let drift = (state.norm() - norm0).abs();
    if drift > opts.norm_tol {
        return Err(Error::NormDrift {
            time: state.time,
            drift,
            limit: opts.norm_tol,
        });
    }
    let top = state.top_population();
    if top > opts.top_tol {
        return Err(Error::TruncationSaturated {
            time: state.time,
            population: top,
        });
    }
    Ok((drift, top))
}

/// `e^{−iHt}|ψ⟩`, checking norm drift and ladder saturation at the end.
pub fn evolve(state: &FockState, h: &CsrMatrix, t: f64, opts: &EvolveOptions) -> Result<FockState> {
    if h.dim() != state.amps.len() {
        return Err(Error::InvalidBasis("Hamiltonian and state dimensions differ".into()));
    }
    let norm0 = state.norm();
    let stepper = Stepper::new(h, opts.propagator)?;
    let mut out = state.clone();
    stepper.advance(&mut out.amps, t)?;
    out.time += t;
    check_health(&out, norm0, opts)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    pub s_num: f64,
    pub n_mean_1: f64,
    pub n_mean_2: f64,
    pub norm_drift: f64,
    pub top_population: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
    pub final_state: FockState,
    /// First sample time that failed the saturation check under [`SaturationPolicy::Truncate`].
    pub truncated_at: Option<f64>,
}

/// Sample the evolution at increasing `times` (measured from `state.time`).
pub fn trace(state: &FockState, h: &CsrMatrix, times: &[f64], opts: &EvolveOptions) -> Result<Trace> {
    if h.dim() != state.amps.len() {
        return Err(Error::InvalidBasis("Hamiltonian and state dimensions differ".into()));
    }
    if times.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::InvalidParameter("trace times must be non-decreasing".into()));
    }
    let norm0 = state.norm();
    let stepper = Stepper::new(h, opts.propagator)?;
    let mut cur = state.clone();
    let t0 = state.time;
    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        let target = t0 + t;
        stepper.advance(&mut cur.amps, target - cur.time)?;
        cur.time = target;
        let (drift, top) = match check_health(&cur, norm0, opts) {
            Ok(v) => v,
            Err(Error::TruncationSaturated { time, .. }) if opts.saturation == SaturationPolicy::Truncate => {
                log::warn!("Fock ladder saturated at t = {time}; trace truncated");
                return Ok(Trace {
                    rows,
                    final_state: cur,
                    truncated_at: Some(time),
                });
            }
            Err(e) => return Err(e),
        };
        let m = moments(&cur);
        let (s_num, _) = squeeze_factor_from_moments(&m)?;
        rows.push(TraceRow {
            t,
            s_num,
            n_mean_1: m.number[0][0].re,
            n_mean_2: m.number[1][1].re,
            norm_drift: drift,
            top_population: top,
        });
    }
    Ok(Trace {
        rows,
        final_state: cur,
        truncated_at: None,
    })
}

#[cfg(test)]
mod invariants;
