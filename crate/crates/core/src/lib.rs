//! Pseudo-anti-PT symmetric two-mode squeezing.
//!
//! [`dynamics`] holds the closed-form Bogoliubov solution of the two-mode model,
//! [`sensing`] the exceptional-point metrology built on it. [`fock`] and [`bec`]
//! are independent numerical oracles: a truncated Fock-space propagator with an
//! optional Kerr term, and a Hartree–Fock–Bogoliubov ring condensate.
//! [`platform`] maps four-wave-mixing laboratory parameters onto the model.

pub mod bec;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod mat2;
pub mod platform;
pub mod sensing;

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
mod oracle;

pub use bec::{BecParams, BecState, DensityProfile, PairMoments};
pub use dynamics::{
    classify_regime, eigensystem, ground_state_param, lambda0, quadrature_mean, quadrature_stats, quadrature_variance,
    squeeze_summary, transfer_coeffs, CoherentPair, Eigensystem, Mode, ModelParams, QuadratureStats, Regime,
    SqueezeSummary, TransferCoeffs,
};
pub use error::{Error, Result};
pub use fock::{FockBasis, FockState, KerrParams, MomentTable};
pub use mat2::Mat2;
pub use num_complex::Complex64 as C64;
pub use platform::{fwm_coupling, phase_mismatch, FwmParams};
pub use sensing::{
    coeff_derivatives, inverse_variance, monte_carlo_estimate, qfi, sensitivity_report, susceptibility, working_kappas,
    working_points, CoeffDerivatives, MonteCarloSummary, Parameter, SensitivityReport, SensorConfig, SensorTime,
};

/// Crate version, recorded in CLI output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
