use super::*;
use crate::dynamics::{squeeze_summary, transfer_coeffs, ModelParams};
use proptest::prelude::*;

fn sector_trace(p: &ModelParams, u: f64, cutoff: usize, times: &[f64]) -> Trace {
    let basis = FockBasis::pairs(cutoff).unwrap();
    let h = build_hamiltonian(p, KerrParams { u }, &basis).unwrap();
    let vac = prepare_state(&basis, StateKind::Vacuum).unwrap();
    trace(&vac, &h, times, &EvolveOptions::default()).unwrap()
}

fn grid(t_end: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| t_end * i as f64 / n as f64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamiltonian_hermitian_and_norm_preserving(d in -2.0..2.0f64, kr in -1.5..1.5f64, ki in -1.5..1.5f64,
                                                 u in 0.0..0.1f64, t in -3.0..3.0f64) {
        let p = ModelParams::with_complex_kappa(d, C64::new(kr, ki));
        let basis = FockBasis::full(12, 12).unwrap();
        let h = build_hamiltonian(&p, KerrParams { u }, &basis).unwrap();
        prop_assert!(h.hermiticity_error() < 1e-15);
        let kind = StateKind::Coherent { alpha1: C64::new(0.01, 0.02), alpha2: C64::new(-0.02, 0.0) };
        let psi = prepare_state(&basis, kind).unwrap();
        let opts = EvolveOptions { top_tol: 1.0, ..Default::default() };
        let out = evolve(&psi, &h, t, &opts).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        let e0 = energy(&h, &psi);
        prop_assert!((energy(&h, &out) - e0).abs() < 1e-10 * (1.0 + e0.abs()));
    }
}

#[test]
fn energy_conserved_with_kerr() {
    let p = ModelParams::new(1.0, 0.8);
    let basis = FockBasis::full(40, 40).unwrap();
    let h = build_hamiltonian(&p, KerrParams { u: 0.01 }, &basis).unwrap();
    let kind = StateKind::Coherent {
        alpha1: C64::new(0.0, 1.0),
        alpha2: C64::new(1.0, 0.0),
    };
    let psi = prepare_state(&basis, kind).unwrap();
    let e0 = energy(&h, &psi);
    let out = evolve(&psi, &h, 6.0, &EvolveOptions::default()).unwrap();
    assert!((energy(&h, &out) - e0).abs() < 1e-9 * e0.abs().max(1.0));
}

#[test]
fn pair_difference_is_conserved() {
    let p = ModelParams::with_complex_kappa(0.7, C64::new(0.5, 0.3));
    let basis = FockBasis::full(40, 40).unwrap();
    let h = build_hamiltonian(&p, KerrParams { u: 0.02 }, &basis).unwrap();
    let mut psi = prepare_state(&basis, StateKind::Vacuum).unwrap();
    psi.amps.iter_mut().for_each(|a| *a = C64::new(0.0, 0.0));
    psi.amps[basis.index(2, 0).unwrap()] = C64::new(1.0, 0.0);
    let out = evolve(&psi, &h, 4.0, &EvolveOptions::default()).unwrap();
    let leaked: f64 = out
        .amps
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let (n1, n2) = basis.state(*i);
            n1 as i64 - n2 as i64 != 2
        })
        .map(|(_, a)| a.norm_sqr())
        .sum();
    assert!(leaked < 1e-24, "{leaked}");
}

#[test]
fn sector_and_full_bases_agree() {
    let p = ModelParams::new(1.0, 0.95);
    let full = FockBasis::full(80, 80).unwrap();
    let pairs = FockBasis::pairs(80).unwrap();
    let run = |b: &FockBasis| {
        let h = build_hamiltonian(&p, KerrParams { u: 0.001 }, b).unwrap();
        let v = prepare_state(b, StateKind::Vacuum).unwrap();
        evolve(&v, &h, 2.0, &EvolveOptions::default()).unwrap()
    };
    let (a, b) = (run(&full), run(&pairs));
    for n in 0..30 {
        assert!((a.amplitude(n, n) - b.amplitude(n, n)).norm() < 1e-12);
    }
}

#[test]
fn squeezing_matches_closed_form_in_every_regime() {
    for (k, t_end) in [(0.95, 30.0), (1.0, 4.5), (1.05, 3.5)] {
        let p = ModelParams::new(1.0, k);
        let tr = sector_trace(&p, 0.0, 1000, &grid(t_end, 60));
        assert!(tr.truncated_at.is_none());
        for row in &tr.rows {
            let exact = squeeze_summary(&p, row.t).unwrap().squeezing;
            assert!(
                (row.s_num - exact).abs() < 1e-6,
                "κ = {k}, t = {}: {} vs {exact}",
                row.t,
                row.s_num
            );
            let b2 = transfer_coeffs(&p, row.t).b.norm_sqr();
            assert!((row.n_mean_1 - b2).abs() <= 1e-9 * b2.max(1.0));
            assert!(row.norm_drift < 1e-9);
        }
    }
}

#[test]
fn evolved_vacuum_is_pair_squeezed_state() {
    let p = ModelParams::new(1.0, 0.95);
    let basis = FockBasis::pairs(300).unwrap();
    let h = build_hamiltonian(&p, KerrParams::default(), &basis).unwrap();
    let vac = prepare_state(&basis, StateKind::Vacuum).unwrap();
    let stepper = propagate::Stepper::new(&h, Propagator::default()).unwrap();
    let mut psi = vac.clone();
    let mut t = 0.0;
    for _ in 0..10 {
        stepper.advance(&mut psi.amps, 3.0).unwrap();
        t += 3.0;
        let c = transfer_coeffs(&p, t);
        let q = c.b / c.a.conj();
        let reference = prepare_state(&basis, StateKind::PairSqueezed { q }).unwrap();
        assert!(fidelity(&reference, &psi).unwrap() > 1.0 - 1e-10, "t = {t}");
    }
}

#[test]
fn rk4_agrees_with_chebyshev() {
    let p = ModelParams::new(1.0, 1.05);
    let times = grid(2.0, 4);
    let basis = FockBasis::pairs(120).unwrap();
    let h = build_hamiltonian(&p, KerrParams { u: 1e-3 }, &basis).unwrap();
    let vac = prepare_state(&basis, StateKind::Vacuum).unwrap();
    let cheb = trace(&vac, &h, &times, &EvolveOptions::default()).unwrap();
    let opts = EvolveOptions {
        propagator: Propagator::Rk4 { local_error: 1e-13 },
        ..Default::default()
    };
    let rk = trace(&vac, &h, &times, &opts).unwrap();
    for (a, b) in cheb.rows.iter().zip(&rk.rows) {
        assert!((a.s_num - b.s_num).abs() < 1e-7 * a.s_num, "{} vs {}", a.s_num, b.s_num);
    }
}

#[test]
fn weak_kerr_shifts_broken_trace_slightly() {
    // The mean-field shift δ → δ + U(2n̄+1) moves the working points by O(Ut/λ₀²),
    // so the deviation grows along the trace and peaks where S ≈ 1 is steepest.
    let p = ModelParams::new(1.0, 0.95);
    let times = grid(30.0, 60);
    let free = sector_trace(&p, 0.0, 500, &times);
    let kerr = sector_trace(&p, 1e-6, 500, &times);
    for (a, b) in free.rows.iter().zip(&kerr.rows) {
        let rel = (a.s_num - b.s_num).abs() / a.s_num;
        if a.t <= 9.0 {
            assert!(rel <= 1e-3, "t = {}: {rel:e}", a.t);
        }
        assert!(rel <= 5e-3, "t = {}: {rel:e}", a.t);
    }
    let s_max = squeeze_summary(&p, 0.0).unwrap().s_max.unwrap();
    let peak = kerr.rows.iter().map(|r| r.s_num).fold(0.0, f64::max);
    assert!((peak - s_max).abs() < 1e-3 * s_max);
}

#[test]
fn kerr_suppresses_symmetric_growth() {
    let p = ModelParams::new(1.0, 1.05);
    let times = grid(5.0, 25);
    let free = sector_trace(&p, 0.0, 2000, &times);
    let kerr = sector_trace(&p, 1e-6, 2000, &times);
    let mut checked = 0;
    for (a, b) in free.rows.iter().zip(&kerr.rows) {
        if a.s_num > 10.0 {
            assert!(b.s_num - a.s_num <= 0.0, "t = {}: {} vs {}", a.t, b.s_num, a.s_num);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn kerr_deviation_is_linear_in_u() {
    // A genuine first-order Kerr effect doubles with U; propagation error would not.
    let p = ModelParams::new(1.0, 0.95);
    let times = [29.0, 30.0];
    let free = sector_trace(&p, 0.0, 500, &times);
    let one = sector_trace(&p, 1e-6, 500, &times);
    let two = sector_trace(&p, 2e-6, 500, &times);
    for k in 0..2 {
        let d1 = one.rows[k].s_num - free.rows[k].s_num;
        let d2 = two.rows[k].s_num - free.rows[k].s_num;
        assert!(d1.abs() > 1e-3 && (d2 / d1 - 2.0).abs() < 0.05, "{d1:e} {d2:e}");
    }
}
