use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed scalar or polynomial text.
    #[error("parse error: unexpected `{token}`")]
    Parse { token: String },

    /// A mathematical precondition failed (zero divisor, hypothesis violated, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Exact and floating values were mixed without an explicit conversion.
    #[error("type error: {0}")]
    Type(String),

    /// A value does not fit into binary64.
    #[error("overflow: {0}")]
    Overflow(String),

    /// The numeric root finder gave up.
    #[error("root finder did not converge (worst residual {worst_residual:e})")]
    NoConvergence { worst_residual: f64 },

    /// Inputs are internally inconsistent (e.g. node outside a support pattern).
    #[error("consistency error: {0}")]
    Consistency(String),

    /// A JSON/CSV payload violates its schema.
    #[error("schema error in `{field}`: {detail}")]
    Schema { field: String, detail: String },

    /// Filesystem failure.
    #[error("i/o error on {path}: {detail}")]
    Io { path: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
