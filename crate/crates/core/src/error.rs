use thiserror::Error;

/// Errors raised across the solver stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("vector field returned a non-finite value at t = {t}")]
    Evaluation { t: f64 },

    #[error("Gram matrix of size {size} is ill-conditioned (estimated condition {condition:e})")]
    Conditioning { condition: f64, size: usize },

    #[error("matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("step {index}: {source}")]
    AtStep { index: usize, source: Box<Error> },

    #[error("no closed-form branch covers s = {s}, s' = {s2}")]
    Branch { s: f64, s2: f64 },
}

impl Error {
    /// Innermost error, with step context removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStep { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
