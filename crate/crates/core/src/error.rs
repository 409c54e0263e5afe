use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("duplicate mode label `{0}`")]
    DuplicateMode(String),
    #[error("mode `{label}` has dimension {dim}, at least {min} required")]
    Truncation { label: String, dim: usize, min: usize },
    #[error("operands act on different Hilbert spaces")]
    SpaceMismatch,
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("expected {expected} architecture, got {found}")]
    WrongArchitecture { expected: String, found: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
