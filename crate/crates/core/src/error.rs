use thiserror::Error;

/// Errors produced by the numerical pipeline.
///
/// Variants are grouped into three coarse categories (see [`Error::category`])
/// so front ends can map failures onto stable exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("index range overflow: {0}")]
    Range(String),

    #[error("sequence too short: need index {needed}, have {available} and no generator")]
    Length { needed: usize, available: usize },

    #[error("series did not converge within {limit} terms (last tail estimate {tail:e})")]
    Truncation { limit: usize, tail: f64 },

    #[error("autocovariance is not positive definite at order {order} (prediction variance {variance:e})")]
    NotPositiveDefinite { order: usize, variance: f64 },

    #[error("spectral density negative beyond tolerance at grid index {index}: {value:e}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("factorization residual {residual:e} exceeds tolerance {tol:e}")]
    FactorizationTolerance { residual: f64, tol: f64 },

    #[error("outer series is not contracting at lag {lag} (observed ratio {ratio:.4})")]
    Divergence { lag: usize, ratio: f64 },

    #[error("quadrature did not reach the requested accuracy: {0}")]
    Accuracy(String),

    #[error("empty or invalid window: {0}")]
    Window(String),
}

/// Coarse failure classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// The model or its parameters are unusable.
    Model,
    /// A numerical routine failed on a valid model.
    Numerical,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidModel(_) | Error::Domain(_) | Error::Range(_) | Error::Window(_) => {
                ErrorCategory::Model
            }
            _ => ErrorCategory::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
