use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of a gamma factor at {0}")]
    Pole(String),

    #[error("empty strip: {0}")]
    EmptyStrip(String),

    #[error("non-integrable singularity at {point}: exponent {exponent} (need > -2)")]
    NonIntegrable { point: String, exponent: f64 },

    #[error("no convergence after {subdivisions} subdivisions; worst panel [{lo}, {hi}] with error {error:e}")]
    NoConvergence { subdivisions: usize, lo: f64, hi: f64, error: f64 },

    #[error("insufficient decay: {0}")]
    NonDecay(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
