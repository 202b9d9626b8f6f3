//! Compressed-row complex matrices and the two-mode Fock Hamiltonian.

use super::basis::FockBasis;
use crate::dynamics::ModelParams;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Rows above this count use the parallel kernel.
const PAR_ROWS: usize = 1 << 15;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl CsrMatrix {
    /// Build from per-row `(col, value)` lists; columns within a row must be sorted.
    pub fn from_rows(rows: Vec<Vec<(usize, C64)>>) -> Self {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.row(i).find(|&(c, _)| c == j).map(|(_, v)| v).unwrap_or_default()
    }

    fn row_dot(&self, i: usize, x: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for k in self.row_ptr[i]..self.row_ptr[i + 1] {
            acc += self.vals[k] * x[self.cols[k]];
        }
        acc
    }

    /// `y = H x`.
    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.dim);
        if self.dim >= PAR_ROWS {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(i, yi)| *yi = self.row_dot(i, x));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = self.row_dot(i, x);
            }
        }
    }

    /// Largest `|H_ij − conj(H_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum of a Hermitian matrix.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let mut center = 0.0;
            let mut radius = 0.0;
            for (j, v) in self.row(i) {
                if j == i {
                    center = v.re;
                } else {
                    radius += v.norm();
                }
            }
            lo = lo.min(center - radius);
            hi = hi.max(center + radius);
        }
        (lo, hi)
    }

    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let mut out = vec![vec![C64::new(0.0, 0.0); self.dim]; self.dim];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        out
    }
}

/// Single-particle Kerr strength in `(U/2) Σ_i n_i²`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KerrParams {
    pub u: f64,
}

/// `H = δ(n₁+n₂) + i(κ a₁†a₂† − κ* a₁a₂) + (U/2)(n₁² + n₂²)` on `basis`.
pub fn build_hamiltonian(params: &ModelParams, kerr: KerrParams, basis: &FockBasis) -> Result<CsrMatrix> {
    params.validate()?;
    if !kerr.u.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite Kerr strength {}", kerr.u)));
    }
    let i_unit = C64::new(0.0, 1.0);
    let up = i_unit * params.kappa;
    let down = -i_unit * params.kappa.conj();
    let rows = (0..basis.dim())
        .map(|i| {
            let (n1, n2) = basis.state(i);
            let (f1, f2) = (n1 as f64, n2 as f64);
            let mut row = Vec::with_capacity(3);
            // ⟨n₁,n₂|a₁†a₂†|n₁−1,n₂−1⟩ = sqrt(n₁n₂)
            if n1 > 0 && n2 > 0 {
                if let Some(j) = basis.index(n1 - 1, n2 - 1) {
                    row.push((j, up * (f1 * f2).sqrt()));
                }
            }
            let diag = params.delta * (f1 + f2) + 0.5 * kerr.u * (f1 * f1 + f2 * f2);
            row.push((i, C64::new(diag, 0.0)));
            if let Some(j) = basis.index(n1 + 1, n2 + 1) {
                row.push((j, down * ((f1 + 1.0) * (f2 + 1.0)).sqrt()));
            }
            row
        })
        .collect();
    Ok(CsrMatrix::from_rows(rows))
}
