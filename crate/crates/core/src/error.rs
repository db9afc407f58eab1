use thiserror::Error;

/// Errors raised by the focal-field and scattering engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configuration value (quadrature order, grid size, tolerance) is invalid.
    #[error("configuration error: {0}")]
    Config(String),
    /// Adaptive quadrature or a cross-check did not reach the requested accuracy.
    #[error("accuracy error: estimate {estimate:e}, gap {gap:e} ({context})")]
    Accuracy {
        estimate: f64,
        gap: f64,
        context: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
