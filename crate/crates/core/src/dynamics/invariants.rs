use super::*;
use crate::oracle;
use proptest::prelude::*;

fn params(delta: f64, ratio: f64, phase: f64) -> ModelParams {
    ModelParams::with_complex_kappa(delta, C64::from_polar(ratio * delta.abs(), phase))
}

/// `|κ/δ|` spread over all three regimes, with a share pinned near the EP.
fn ratio() -> impl Strategy<Value = f64> {
    prop_oneof![
        3 => 0.0..2.5f64,
        1 => (-1e-6..1e-6f64).prop_map(|e| 1.0 + e),
        1 => Just(1.0),
    ]
}

fn delta() -> impl Strategy<Value = f64> {
    prop_oneof![0.05..3.0f64, -3.0..-0.05f64]
}

fn phase() -> impl Strategy<Value = f64> {
    -PI..PI
}

/// Times with `λ₀|t|` bounded in the symmetric regime so entries stay representable.
fn time_for(p: &ModelParams, u: f64) -> f64 {
    let scale = if p.discriminant() < 0.0 {
        10.0 / lambda0(p)
    } else {
        40.0 / p.delta.abs()
    };
    u * scale.min(40.0 / p.delta.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn symplectic(d in delta(), r in ratio(), ph in phase(), u in -1.0..1.0f64) {
        let p = params(d, r, ph);
        let c = transfer_coeffs(&p, time_for(&p, u));
        let rel = c.symplectic_defect().abs() / c.a.norm_sqr();
        prop_assert!(rel < 1e-10, "{rel:e}");
    }

    #[test]
    fn matches_matrix_exponential(d in delta(), r in ratio(), ph in phase(), u in -1.0..1.0f64) {
        let p = params(d, r, ph);
        let t = time_for(&p, u).clamp(-5.0 / lambda0(&p).max(1e-300), 5.0 / lambda0(&p).max(1e-300));
        let m = transfer_coeffs(&p, t).matrix();
        let e = oracle::propagator(p.delta, p.kappa, t);
        let scale = m.0.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((m.0[i][j] - e[i][j]).norm() < 1e-12 * scale * scale.max(30.0),
                    "{i}{j}: {} vs {}", m.0[i][j], e[i][j]);
            }
        }
    }

    #[test]
    fn composition(d in delta(), r in ratio(), ph in phase(), u1 in -0.5..0.5f64, u2 in -0.5..0.5f64) {
        let p = params(d, r, ph);
        let (t1, t2) = (time_for(&p, u1), time_for(&p, u2));
        let lhs = transfer_coeffs(&p, t1 + t2).matrix();
        let rhs = transfer_coeffs(&p, t2).matrix() * transfer_coeffs(&p, t1).matrix();
        let scale = rhs.0.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10 * scale * scale, "{}", lhs.max_abs_diff(&rhs));
    }

    #[test]
    fn time_reversal(d in delta(), r in ratio(), ph in phase(), u in 0.0..1.0f64) {
        let p = params(d, r, ph);
        let t = time_for(&p, u);
        let f = transfer_coeffs(&p, t);
        let b = transfer_coeffs(&p, -t);
        prop_assert!((b.a - f.a.conj()).norm() <= 1e-14 * f.a.norm());
        prop_assert!((b.b + f.b).norm() <= 1e-14 * f.a.norm());
    }

    #[test]
    fn exceptional_point_continuity(d in delta(), sign in prop_oneof![Just(-1.0), Just(1.0)],
                                    ph in phase(), u in 0.0..10.0f64) {
        let p = params(d, 1.0 + sign * 1e-8, ph);
        let t = u / d.abs();
        let c = transfer_coeffs(&p, t);
        let a_ep = C64::new(1.0, -p.delta * t);
        let b_ep = p.kappa * t;
        prop_assert!((c.a - a_ep).norm() <= 1e-6 * a_ep.norm());
        prop_assert!((c.b - b_ep).norm() <= 1e-6 * b_ep.norm().max(1e-300));
    }

    #[test]
    fn broken_period_and_peak(d in delta(), r in 0.05..0.999f64, ph in phase(), n in 1u32..6) {
        let p = params(d, r, ph);
        let l0 = lambda0(&p);
        let at = |t: f64| squeeze_summary(&p, t).unwrap();
        let s_max = at(0.0).s_max.unwrap();
        prop_assert!((at(n as f64 * PI / l0).squeezing - 1.0).abs() < 1e-9);
        let peak = at((n as f64 - 0.5) * PI / l0);
        prop_assert!((peak.squeezing - s_max).abs() < 1e-9 * s_max);
        let expected = wrap_angle(0.5 * (-I * p.kappa * p.delta).arg());
        let diff = wrap_angle(2.0 * (peak.phi_plus - expected)) / 2.0;
        prop_assert!(diff.abs() < 1e-9, "φ₊ {} vs {}", peak.phi_plus, expected);
        for k in 0..=64 {
            let t = k as f64 / 64.0 * PI / l0;
            prop_assert!(at(t).squeezing <= s_max * (1.0 + 1e-12));
        }
    }

    #[test]
    fn symmetric_asymptote(d in delta(), r in 1.001..3.0f64, ph in phase(), x in 9.0..15.0f64) {
        let p = params(d, r, ph);
        let l0 = lambda0(&p);
        let s = squeeze_summary(&p, x / l0).unwrap().squeezing;
        let ratio = s * l0 / (p.kappa.norm() * x.exp());
        prop_assert!((ratio - 1.0).abs() < 1e-6, "{ratio}");
    }

    #[test]
    fn ep_squeezing(d in delta(), ph in phase(), u in 0.0..50.0f64) {
        let p = params(d, 1.0, ph);
        let t = u / d.abs();
        let s = squeeze_summary(&p, t).unwrap().squeezing;
        let exact = (1.0 + (d * t).powi(2)).sqrt() + d.abs() * t;
        prop_assert!((s - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn eigensystem_propagator_agrees(d in delta(), r in prop_oneof![0.0..0.99f64, 1.01..2.5f64],
                                     ph in phase(), u in -1.0..1.0f64) {
        let p = params(d, r, ph);
        let t = time_for(&p, u).clamp(-5.0 / lambda0(&p), 5.0 / lambda0(&p));
        let e = eigensystem(&p).unwrap();
        let m = transfer_coeffs(&p, t).matrix();
        let scale = m.0.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(e.propagator(t).max_abs_diff(&m) < 1e-9 * scale);
    }

    #[test]
    fn broken_eigenvalues_mirror(d in delta(), r in 0.0..0.999f64, ph in phase()) {
        // λ₊ = −λ₋* holds in the broken regime, where both eigenvalues are real.
        let e = eigensystem(&params(d, r, ph)).unwrap();
        prop_assert!((e.lambda_plus + e.lambda_minus.conj()).norm() < 1e-15);
    }
}

#[test]
fn ten_thousand_symplectic_points_include_near_ep() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut near = 0;
    for k in 0..10_000 {
        let d = rng.random_range(0.1..3.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let r = if k % 4 == 0 {
            near += 1;
            1.0 + rng.random_range(-1e-6..1e-6)
        } else {
            rng.random_range(0.0..2.0)
        };
        let p = params(d, r, rng.random_range(-PI..PI));
        let t = time_for(&p, rng.random_range(-1.0..1.0));
        let c = transfer_coeffs(&p, t);
        assert!(c.symplectic_defect().abs() / c.a.norm_sqr() < 1e-10, "{p:?} {t}");
    }
    assert_eq!(near, 2500);
}
