use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^dagger| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entries length {len} does not match dim {dim} squared")]
    BadShape { dim: usize, len: usize },

    #[error("state trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("state is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("Kraus set `{label}` carries no time derivatives")]
    MissingDerivatives { label: String },

    #[error("integration step {dt} exceeds stability limit {limit}")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("trajectory lost positivity at step {step} (min eigenvalue {min_eigenvalue:.3e})")]
    PositivityViolation { step: usize, min_eigenvalue: f64 },

    #[error("denominator norm vanishes; ratio undefined")]
    ZeroDenominator,
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
