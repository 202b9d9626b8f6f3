//! Independent numerical references: a 2×2 matrix exponential by scaling and
//! squaring of a Taylor series, and Richardson-extrapolated central differences.

#![allow(dead_code)]

use num_complex::Complex64 as C64;

pub type M2 = [[C64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn norm1(a: &M2) -> f64 {
    (0..2).map(|j| a[0][j].norm() + a[1][j].norm()).fold(0.0, f64::max)
}

/// `exp(m)`.
pub fn expm(m: &M2) -> M2 {
    let n = norm1(m);
    let squarings = if n > 0.25 { (n / 0.25).log2().ceil() as i32 } else { 0 };
    let scale = 0.5f64.powi(squarings);
    let x: M2 = [[m[0][0] * scale, m[0][1] * scale], [m[1][0] * scale, m[1][1] * scale]];
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut sum: M2 = [[one, zero], [zero, one]];
    let mut term = sum;
    for k in 1..=24 {
        term = mul(&term, &x);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

/// `exp(−i D t)` for `D = [[δ, iκ], [iκ*, −δ]]`.
pub fn propagator(delta: f64, kappa: C64, t: f64) -> M2 {
    let i = C64::new(0.0, 1.0);
    let d: M2 = [
        [C64::new(delta, 0.0), i * kappa],
        [i * kappa.conj(), C64::new(-delta, 0.0)],
    ];
    let f = -i * t;
    expm(&[[d[0][0] * f, d[0][1] * f], [d[1][0] * f, d[1][1] * f]])
}

/// Fourth-order central difference of `f` at `x`.
pub fn derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}

pub fn derivative_c<F: Fn(f64) -> C64>(f: F, x: f64, h: f64) -> C64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}
