use thiserror::Error;

/// Errors raised by the engine.
///
/// The variants map one-to-one onto the CLI exit-code classes: `Usage` and
/// `Parse` are caller mistakes, `Numeric`, `Divisor` and `Internal` are
/// failures of the computation itself.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("numeric error: {message}")]
    Numeric {
        message: String,
        /// Largest backward errors seen when the iteration gave up, as decimal strings.
        residuals: Vec<String>,
    },

    #[error("point lies on the theta divisor: {0}")]
    Divisor(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
