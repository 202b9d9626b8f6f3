use super::*;
use crate::dynamics::quadrature_mean;
use crate::dynamics::Mode;
use crate::fock::sparse::build_hamiltonian;
use crate::fock::{evolve, fidelity, prepare_state, EvolveOptions, FockBasis, KerrParams, StateKind};
use crate::oracle;
use proptest::prelude::*;

fn kappa_of(p: &ModelParams, wrt: Parameter, x: f64) -> ModelParams {
    match wrt {
        Parameter::Kappa => ModelParams::with_complex_kappa(p.delta, C64::new(x, p.kappa.im)),
        Parameter::Delta => ModelParams::with_complex_kappa(x, p.kappa),
    }
}

fn value(p: &ModelParams, wrt: Parameter) -> f64 {
    match wrt {
        Parameter::Kappa => p.kappa.re,
        Parameter::Delta => p.delta,
    }
}

fn wrt() -> impl Strategy<Value = Parameter> {
    prop_oneof![Just(Parameter::Kappa), Just(Parameter::Delta)]
}

fn amp() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| C64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn derivatives_match_finite_differences(d in -2.0..2.0f64, kr in -2.5..2.5f64, ki in -1.0..1.0f64,
                                            t in -8.0..8.0f64, w in wrt()) {
        let p = ModelParams::with_complex_kappa(d, C64::new(kr, ki));
        let x = value(&p, w);
        let h = 1e-3;
        let fa = oracle::derivative_c(|v| transfer_coeffs(&kappa_of(&p, w, v), t).a, x, h);
        let fb = oracle::derivative_c(|v| transfer_coeffs(&kappa_of(&p, w, v), t).b, x, h);
        let got = coeff_derivatives(&p, t, w);
        let scale = 1.0 + fa.norm() + fb.norm();
        prop_assert!((got.da - fa).norm() < 1e-6 * scale, "{} vs {}", got.da, fa);
        prop_assert!((got.db - fb).norm() < 1e-6 * scale, "{} vs {}", got.db, fb);
    }

    #[test]
    fn symplectic_derivative_vanishes(d in -2.0..2.0f64, k in -2.5..2.5f64, t in -6.0..6.0f64, w in wrt()) {
        // ∂(|A|² − |B|²) = 0
        let p = ModelParams::new(d, k);
        let c = transfer_coeffs(&p, t);
        let g = coeff_derivatives(&p, t, w);
        let lhs = 2.0 * (c.a.conj() * g.da).re - 2.0 * (c.b.conj() * g.db).re;
        prop_assert!(lhs.abs() < 1e-10 * (1.0 + c.a.norm_sqr()) * (1.0 + t.abs()));
    }

    #[test]
    fn cramer_rao(d in -2.0..2.0f64, k in -2.5..2.5f64, t in 0.0..10.0f64,
                  a1 in amp(), a2 in amp(), w in wrt()) {
        let p = ModelParams::new(d, k);
        let cfg = SensorConfig::at_time(p, t).with_alphas(CoherentPair::new(a1, a2)).with_wrt(w);
        let r = sensitivity_report(&cfg).unwrap();
        prop_assert!(r.inv_var <= r.qfi * (1.0 + 1e-9) + 1e-9, "{r:?}");
        prop_assert!(r.ratio >= 0.0 && r.ratio <= 1.0 + 1e-9);
    }

    #[test]
    fn susceptibility_is_mean_slope(d in -2.0..2.0f64, k in -2.5..2.5f64, t in 0.0..8.0f64,
                                    a1 in amp(), a2 in amp(), w in wrt()) {
        let p = ModelParams::new(d, k);
        let alphas = CoherentPair::new(a1, a2);
        let cfg = SensorConfig::at_time(p, t).with_alphas(alphas).with_wrt(w);
        let chi = susceptibility(&cfg).unwrap();
        let x = value(&p, w);
        let fd = oracle::derivative(|v| quadrature_mean(&kappa_of(&p, w, v), t, &alphas, 0.0, Mode::First), x, 1e-3);
        prop_assert!((chi - fd).abs() < 1e-6 * (1.0 + fd.abs()), "{chi} vs {fd}");
    }

    #[test]
    fn working_point_closed_form(d in 0.2..3.0f64, r in 0.3..0.999f64, n in 1u32..6,
                                 sign in prop_oneof![Just(-1.0), Just(1.0)]) {
        let p = ModelParams::new(sign * d, sign * r * d);
        let cfg = SensorConfig::working_point(p, n);
        let alpha = 2.0 * sign;
        let chi = susceptibility(&cfg).unwrap();
        let closed = working_point_chi(&p, alpha, n);
        prop_assert!((chi - closed).abs() <= 1e-8 * closed.abs(), "{chi} vs {closed}");
        let t = cfg.resolve_time().unwrap();
        prop_assert!((quadrature_variance(&p, t) - 0.25).abs() < 1e-9);
    }

    #[test]
    fn divergent_scalings_near_ep(d in 0.5..3.0f64, n in 1u32..4) {
        // χλ₀³ and Fλ₀⁶ flatten once λ₀ ≪ |δ|; checked across one decade.
        let values = |l0: f64| {
            let p = ModelParams::new(d, ((d - l0) * (d + l0)).sqrt());
            let r = sensitivity_report(&SensorConfig::working_point(p, n)).unwrap();
            (r.chi * l0.powi(3), r.qfi * l0.powi(6))
        };
        let (c_hi, f_hi) = values(0.05 * d);
        let (c_lo, f_lo) = values(0.005 * d);
        prop_assert!((c_hi / c_lo - 1.0).abs() < 0.01, "{c_hi} {c_lo}");
        prop_assert!((f_hi / f_lo - 1.0).abs() < 0.01, "{f_hi} {f_lo}");
    }

    #[test]
    fn heisenberg_order(d in 0.5..3.0f64, n in 1u32..4, alpha in 0.5..4.0f64) {
        // Peak excitation N = 2|κ|²/λ₀² during the cycle; Δ⁻²/(N²t²) stays bounded.
        let ratio = |l0: f64| {
            let p = ModelParams::new(d, ((d - l0) * (d + l0)).sqrt());
            let cfg = SensorConfig::working_point(p, n).with_alphas(CoherentPair::sensing(alpha));
            let t = cfg.resolve_time().unwrap();
            let big_n = 2.0 * p.kappa.norm_sqr() / (l0 * l0);
            inverse_variance(&cfg).unwrap() / (big_n * big_n * t * t)
        };
        let values: Vec<f64> = [0.3, 0.1, 0.03].iter().map(|f| ratio(f * d)).collect();
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(0.0, f64::max);
        prop_assert!(hi / lo < 1.5, "{values:?}");
        prop_assert!((values[2] / (alpha * alpha * 4.0) - 1.0).abs() < 0.05);
    }
}

#[test]
fn inverse_variance_peaks_at_working_points() {
    let p = ModelParams::new(1.0, 0.95);
    let period = PI / lambda0(&p);
    let iv = |t: f64| inverse_variance(&SensorConfig::at_time(p, t)).unwrap();
    for n in 1..=4 {
        let t = n as f64 * period;
        assert!(
            iv(t) > iv(t - 0.05 * period) && iv(t) > iv(t + 0.05 * period),
            "n = {n}"
        );
    }
    assert_eq!(iv(0.0), 0.0);
    assert_eq!(qfi(&SensorConfig::at_time(p, 0.0)).unwrap(), 0.0);
}

#[test]
fn ratio_approaches_half_with_amplitude() {
    let p = ModelParams::new(1.0, 0.95);
    let ratios: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&a| {
            let cfg = SensorConfig::working_point(p, 2).with_alphas(CoherentPair::sensing(a));
            sensitivity_report(&cfg).unwrap().ratio
        })
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
    assert!(ratios[4] < 0.5 && ratios[4] > 0.499, "{ratios:?}");
}

#[test]
fn symmetric_qfi_exponential_scaling() {
    // F·λ₀⁶·e^{−4λ₀t} settles once the decaying branch is negligible.
    for (d, k) in [(1.0, 1.3), (1.0, 1.05), (-0.7, 2.0)] {
        let p = ModelParams::new(d, k);
        let l0 = lambda0(&p);
        let rel = |x: f64| {
            let f = qfi(&SensorConfig::at_time(p, x / l0)).unwrap();
            f * l0.powi(6) * (-4.0 * x).exp()
        };
        let (a, b) = (rel(10.0), rel(14.0));
        assert!(a > 0.0 && (b / a - 1.0).abs() < 1e-6, "{a} {b}");
    }
}

/// Fisher information of the evolved state from the Fock propagator:
/// `|⟨ψ(κ−h)|ψ(κ+h)⟩|² ≈ 1 − F h²`.
#[test]
fn qfi_matches_fock_state_overlap() {
    let basis = FockBasis::full(48, 48).unwrap();
    let alphas = CoherentPair::new(C64::new(0.3, 0.8), C64::new(-0.6, 0.2));
    let kind = StateKind::Coherent {
        alpha1: alphas.alpha1,
        alpha2: alphas.alpha2,
    };
    let psi0 = prepare_state(&basis, kind).unwrap();
    for (d, k, t, w) in [
        (1.0, 0.6, 2.3, Parameter::Kappa),
        (0.8, 0.95, 1.2, Parameter::Kappa),
        (-1.0, 0.5, 2.0, Parameter::Delta),
    ] {
        let p = ModelParams::new(d, k);
        let h = 2e-4;
        let x = value(&p, w);
        let at = |v: f64| {
            let q = kappa_of(&p, w, v);
            let ham = build_hamiltonian(&q, KerrParams::default(), &basis).unwrap();
            evolve(&psi0, &ham, t, &EvolveOptions::default()).unwrap()
        };
        let ov = fidelity(&at(x - h), &at(x + h)).unwrap();
        let fock = (1.0 - ov) / (h * h);
        let cfg = SensorConfig::at_time(p, t).with_alphas(alphas).with_wrt(w);
        let f = qfi(&cfg).unwrap();
        assert!((fock - f).abs() < 2e-3 * f, "{w:?}: fock {fock} vs closed {f}");
    }
}
