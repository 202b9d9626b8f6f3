//! Shared inputs for the benchmarks.

use papt_core::ModelParams;

/// One point per regime at `δ = 1`.
pub fn regime_points() -> [(&'static str, ModelParams); 3] {
    [
        ("broken", ModelParams::new(1.0, 0.95)),
        ("ep", ModelParams::new(1.0, 1.0)),
        ("symmetric", ModelParams::new(1.0, 1.05)),
    ]
}
