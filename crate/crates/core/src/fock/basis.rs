use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Truncated two-mode Fock basis, optionally restricted to a fixed `n₁ − n₂`.
///
/// Full basis index: `n₁(N₂+1) + n₂`. Sector basis: states ordered by `n₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockBasis {
    n1_max: usize,
    n2_max: usize,
    sector: Option<i64>,
}

impl FockBasis {
    pub fn full(n1_max: usize, n2_max: usize) -> Result<Self> {
        if n1_max < 1 || n2_max < 1 {
            return Err(Error::InvalidBasis(format!(
                "cutoffs ({n1_max}, {n2_max}) must be at least 1"
            )));
        }
        Ok(Self {
            n1_max,
            n2_max,
            sector: None,
        })
    }

    /// States `|n₂ + c, n₂⟩` inside the cutoffs.
    pub fn sector(n1_max: usize, n2_max: usize, c: i64) -> Result<Self> {
        let b = Self {
            n1_max,
            n2_max,
            sector: Some(c),
        };
        if n1_max < 1 || n2_max < 1 {
            return Err(Error::InvalidBasis(format!(
                "cutoffs ({n1_max}, {n2_max}) must be at least 1"
            )));
        }
        if b.dim() == 0 {
            return Err(Error::InvalidBasis(format!("sector n1 - n2 = {c} is empty")));
        }
        Ok(b)
    }

    /// Pair sector `c = 0` with a common cutoff.
    pub fn pairs(n_max: usize) -> Result<Self> {
        Self::sector(n_max, n_max, 0)
    }

    pub fn cutoffs(&self) -> (usize, usize) {
        (self.n1_max, self.n2_max)
    }

    pub fn sector_index(&self) -> Option<i64> {
        self.sector
    }

    fn n2_range(&self, c: i64) -> (i64, i64) {
        let lo = (-c).max(0);
        let hi = (self.n2_max as i64).min(self.n1_max as i64 - c);
        (lo, hi)
    }

    pub fn dim(&self) -> usize {
        match self.sector {
            None => (self.n1_max + 1) * (self.n2_max + 1),
            Some(c) => {
                let (lo, hi) = self.n2_range(c);
                (hi - lo + 1).max(0) as usize
            }
        }
    }

    /// Occupations of basis state `i`.
    pub fn state(&self, i: usize) -> (usize, usize) {
        match self.sector {
            None => (i / (self.n2_max + 1), i % (self.n2_max + 1)),
            Some(c) => {
                let n2 = self.n2_range(c).0 + i as i64;
                ((n2 + c) as usize, n2 as usize)
            }
        }
    }

    /// Index of `|n₁, n₂⟩`, or `None` outside the basis.
    pub fn index(&self, n1: usize, n2: usize) -> Option<usize> {
        if n1 > self.n1_max || n2 > self.n2_max {
            return None;
        }
        match self.sector {
            None => Some(n1 * (self.n2_max + 1) + n2),
            Some(c) => {
                if n1 as i64 - n2 as i64 != c {
                    return None;
                }
                Some((n2 as i64 - self.n2_range(c).0) as usize)
            }
        }
    }

    /// True when `|n₁, n₂⟩` lies in the top 5% of either mode's ladder.
    pub fn is_top(&self, n1: usize, n2: usize) -> bool {
        n1 as f64 > 0.95 * self.n1_max as f64 || n2 as f64 > 0.95 * self.n2_max as f64
    }
}
