use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("quadrature failed in {op}: {msg}")]
    Quadrature { op: &'static str, msg: String },

    /// Config text could not be parsed.
    #[error("config parse error at line {line}: {msg}")]
    ConfigParse { line: usize, msg: String },

    /// A parameter violates one of its invariants. `field` names the key.
    #[error("invalid `{field}`: {msg}")]
    Validation { field: String, msg: String },

    /// Simulation aborted: non-finite state, positivity loss, CFL breach.
    #[error("numerical abort at t = {t}: {msg}")]
    Numerical { t: f64, msg: String },

    #[error("snapshot checksum error: {0}")]
    Checksum(String),

    #[error("malformed snapshot: {0}")]
    Snapshot(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub(crate) fn validation(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            msg: msg.into(),
        }
    }

    pub(crate) fn numerical(t: f64, msg: impl Into<String>) -> Self {
        Error::Numerical { t, msg: msg.into() }
    }

    /// Stamps the time onto a numerical abort raised below the time loop.
    pub(crate) fn at_time(self, t: f64) -> Self {
        match self {
            Error::Numerical { msg, .. } => Error::Numerical { t, msg },
            other => other,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by user-supplied configuration.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::ConfigParse { .. } | Error::Validation { .. } | Error::Domain { .. }
        )
    }

    /// True for aborts raised by the numerical schemes.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical { .. } | Error::Quadrature { .. })
    }
}
