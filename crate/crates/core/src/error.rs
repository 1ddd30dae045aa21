use thiserror::Error;

/// Errors raised by the library.
///
/// Violations of metric axioms are not errors; they are reported as data by
/// [`crate::metric::check_metric_axioms`].
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of an operation (unknown point,
    /// empty sample, invalid order, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A graph line could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A graph bit string has the wrong number of edge slots.
    #[error("length error at line {line}: expected {expected} edge slots, found {found}")]
    Length {
        line: usize,
        expected: usize,
        found: usize,
    },

    /// Full enumeration of a graph space was refused.
    #[error("enumeration cap exceeded: {slots} edge slots requested but the cap is {cap}; rerun with a cap of at least {slots}")]
    CapExceeded { slots: usize, cap: usize },

    /// An experiment configuration is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
