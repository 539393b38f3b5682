use thiserror::Error;

/// Errors raised by the simulation engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension {dim} exceeds the supported maximum {max}")]
    SizeLimit { dim: usize, max: usize },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {what} (residual {residual:e})")]
    Numerical { what: String, residual: f64 },

    #[error("at J = {coupling}, fields = {fields:?}, T = {temperature}: {source}")]
    AtPoint {
        coupling: f64,
        fields: Vec<f64>,
        temperature: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
