use thiserror::Error;

/// Errors raised by the toolkit. Hypothesis and dimension errors become
/// `inapplicable` verdicts in a suite run; config and convergence errors abort it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("capability unavailable: {0}")]
    Capability(String),
    #[error("dimension too small: Q = {q}, need Q >= {min}")]
    DimensionTooSmall { q: usize, min: usize },
    #[error("invalid harmonic index: {0}")]
    InvalidIndex(String),
    #[error("not a Bessel pair: {0}")]
    NotBesselPair(String),
    #[error("support error: {0}")]
    Support(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that make a check inapplicable rather than broken.
    pub fn is_inapplicable(&self) -> bool {
        matches!(
            self,
            Error::DimensionTooSmall { .. } | Error::Hypothesis(_) | Error::Support(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
