use super::*;

fn particle_number(state: &BecState, params: &BecParams) -> f64 {
    let excited: f64 = state
        .m
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let (ap, am) = params.seeds(k + 1);
            let pm = pair_moments(m, ap, am);
            pm.normal_plus + pm.normal_minus
        })
        .sum();
    2.0 * PI * state.phi.norm_sqr() + excited
}

#[test]
fn pairs_stay_symplectic_and_number_is_conserved() {
    let p = BecParams::ring(0.468, 20.0);
    let mut s = BecState::initial(&p);
    let n0 = particle_number(&s, &p);
    for k in 1..=30_000 {
        s = step(&s, &p).unwrap();
        if k % 250 == 0 {
            assert!(s.symplectic_defect() < 1e-8, "t = {}: {:e}", s.t, s.symplectic_defect());
            let drift = (particle_number(&s, &p) - n0).abs() / n0;
            assert!(drift < 1e-9, "t = {}: {drift:e}", s.t);
            for (k, m) in s.m.iter().enumerate() {
                let (ap, am) = p.seeds(k + 1);
                let pm = pair_moments(m, ap, am);
                let floor = m.get(0, 1).norm_sqr();
                assert!(pm.normal_plus >= floor && pm.normal_minus >= floor);
                assert!((m.get(1, 1) - m.get(0, 0).conj()).norm() < 1e-9 * m.get(0, 0).norm());
                assert!((m.get(1, 0) - m.get(0, 1).conj()).norm() < 1e-9 * m.get(0, 0).norm());
            }
        }
    }
}

#[test]
fn higher_modes_squeeze_less() {
    let p = BecParams::ring(0.48, 2.0);
    let run = evolve(&p, 30.0, Some(0.01)).unwrap();
    let peaks: Vec<f64> = (0..p.n_max)
        .map(|k| run.samples.iter().map(|s| s.s_n[k]).fold(0.0, f64::max))
        .collect();
    assert!(peaks.windows(2).all(|w| w[1] <= w[0]), "{peaks:?}");
    assert!((peaks[0] - 5.0).abs() < 0.05 && peaks[1] < 1.2, "{peaks:?}");
}

#[test]
fn first_pair_period_tracks_frozen_model() {
    let p = BecParams::ring(0.48, 2.0);
    let run = evolve(&p, 34.0, Some(0.01)).unwrap();
    let s1: Vec<(f64, f64)> = run.samples.iter().map(|s| (s.t, s.s_n[0])).collect();
    let minima: Vec<f64> = s1
        .windows(3)
        .filter(|w| w[1].1 < w[0].1 && w[1].1 <= w[2].1 && w[1].0 > 1.0)
        .map(|w| w[1].0)
        .collect();
    let period = PI / 0.2;
    assert!(minima.len() >= 2, "{minima:?}");
    for (n, t) in minima.iter().take(2).enumerate() {
        let want = (n + 1) as f64 * period;
        assert!((t - want).abs() < 0.02 * want, "minimum {t} vs {want}");
    }
    let max_dep = run.samples.iter().map(|s| s.depletion.abs()).fold(0.0, f64::max);
    assert!(max_dep < 1e-3, "{max_dep}");
}

#[test]
fn visibility_reads_quadrature_against_condensate_phase() {
    let p = BecParams::ring(0.465, 20.0);
    let run = evolve(&p, 30.0, None).unwrap();
    let s = &run.final_state;
    let (bp, _) = betas(s, &p);
    let x_eff = (C64::from_polar(1.0, FRAC_PI_4 - s.phi.arg()) * bp).re;
    let v = density_profile(s, &p, &theta_grid(3600)).visibility;
    let want = 4.0 * x_eff.abs() / (s.phi.norm() * (2.0 * PI).sqrt());
    assert!((v - want).abs() < 1e-4 * want, "{v} vs {want}");
    assert!((density_profile(s, &p, &theta_grid(3600)).rho.iter().sum::<f64>() / 3600.0 - 1.0).abs() < 1e-12);
}

fn x_at(g: f64, alpha: f64, n_max: usize) -> f64 {
    let mut p = BecParams::ring(g, alpha);
    p.n_max = n_max;
    let run = evolve(&p, 30.0, None).unwrap();
    quadratures(&run.final_state, &p).x_p1
}

#[test]
fn cutoff_convergence_weak_seed() {
    let (a, b) = (x_at(0.465, 2.0, 10), x_at(0.465, 2.0, 20));
    assert!(((a - b) / b).abs() < 1e-6, "{a} {b}");
}

#[test]
fn cutoff_convergence_strong_seed_is_first_order() {
    // The anomalous moments fall off as n⁻², so the truncated back-action sum
    // converges like 1/n_max.
    let xs: Vec<f64> = [10, 20, 40].iter().map(|&n| x_at(0.462, 20.0, n)).collect();
    let d1 = (xs[0] - xs[1]).abs() / xs[1].abs();
    let d2 = (xs[1] - xs[2]).abs() / xs[2].abs();
    assert!(d1 < 1e-5, "{xs:?}");
    assert!(d1 / d2 > 1.5 && d1 / d2 < 2.5, "{d1:e} {d2:e}");
}

#[test]
fn sweep_rows_keep_grid_order() {
    let base = BecParams::ring(0.4, 2.0);
    let grid = [0.3, 0.35, 0.4, 0.5];
    let rows = sensing_sweep(&base, &grid, 5.0).unwrap();
    assert_eq!(rows.iter().map(|r| r.g).collect::<Vec<_>>(), grid);
    assert!(rows[3].flagged && !rows[2].flagged);
    let again = sensing_sweep(&base, &grid, 5.0).unwrap();
    assert_eq!(rows, again);
}

#[test]
fn free_limit_quadrature() {
    for t in [0.3, 1.0, 2.5] {
        let mut p = BecParams::ring(0.0, 3.0);
        p.n_max = 3;
        let run = evolve(&p, t, None).unwrap();
        assert!((quadratures(&run.final_state, &p).x_p1 - 3.0 * t.sin()).abs() < 1e-10);
    }
}
