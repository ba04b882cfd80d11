//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported sector: {model} with {n_exc} excitation(s)")]
    UnsupportedSector { model: &'static str, n_exc: usize },

    #[error("chain length must be at least 2, got {0}")]
    ChainTooShort(usize),

    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),

    #[error("matrix is not Hermitian: max asymmetry {0:e}")]
    NotHermitian(f64),

    #[error("matrix has a non-finite entry")]
    NonFiniteEntry,

    #[error("eigensolver failed to converge")]
    EigenFailure,

    #[error("invalid transfer target: {0}")]
    InvalidTarget(String),

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("time window is empty or not positive")]
    EmptyWindow,

    #[error("temperature must be positive, got {0}")]
    InvalidTemperature(f64),

    #[error("not enough data: {0}")]
    NotEnoughData(String),
}
