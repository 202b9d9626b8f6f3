use thiserror::Error;

/// Errors raised by the model, the sensing metrics and the numerical oracles.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("detuning and coupling are both zero; the regime is undefined")]
    DegenerateParams,

    #[error("regime tolerance {0} outside (0, 1e-3]")]
    InvalidTolerance(f64),

    #[error("parameters sit on the exceptional point; eigenvectors coalesce")]
    Coalescence,

    #[error("no stationary pair state: the model is not in the broken regime with nonzero coupling")]
    NoGroundState,

    #[error("working points require the broken regime (|delta| > |kappa|)")]
    NotBroken,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid Fock basis: {0}")]
    InvalidBasis(String),

    #[error("Fock cutoff too small: truncated tail mass {tail:.3e} exceeds {limit:.1e}")]
    CutoffTooSmall { tail: f64, limit: f64 },

    #[error("Fock truncation saturated at t = {time}: top-level population {population:.3e}")]
    TruncationSaturated { time: f64, population: f64 },

    #[error("norm drift {drift:.3e} exceeds {limit:.1e} at t = {time}")]
    NormDrift { time: f64, drift: f64, limit: f64 },

    #[error("step control failed: {0}")]
    StepControl(String),

    #[error("non-physical moment table: two-mode variance {0:.3e} is not positive")]
    NonPhysicalMoments(f64),

    #[error("susceptibility {chi:.3e} too small for a linearized estimator")]
    IllConditioned { chi: f64 },

    #[error("symplectic defect {defect:.3e} per step at dt = {dt:.3e}; reduce the step")]
    StepSize { defect: f64, dt: f64 },
}

impl Error {
    /// True for failures that signal an invalid numerical run (truncation, drift,
    /// integrator breakdown) rather than invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::TruncationSaturated { .. }
                | Error::NormDrift { .. }
                | Error::StepControl(_)
                | Error::NonPhysicalMoments(_)
                | Error::StepSize { .. }
                | Error::IllConditioned { .. }
                | Error::CutoffTooSmall { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
