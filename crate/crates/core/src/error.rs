use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported prime: {0}")]
    UnsupportedPrime(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("precision error: {message} (suggested truncation {suggested})")]
    Precision { message: String, suggested: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("axiom violation: {0}")]
    AxiomViolation(String),
    #[error("shape assertion failed: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
