use std::io;

use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The variants map one-to-one onto the CLI exit classes: `Domain` and
/// `Config` are validation failures, `Guard` is a refusal to run an
/// oversized brute-force computation, and `Format`/`Io` are persistence
/// failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("guard refused: {0}")]
    Guard(String),

    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        Error::Guard(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
