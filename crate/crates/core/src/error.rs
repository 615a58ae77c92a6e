use std::path::PathBuf;

/// Errors raised by the radio model, the optimizers and the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A value fell outside the domain of a codebook or formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration field holds an invalid value.
    #[error("invalid `{field}`: {message}")]
    Validation { field: &'static str, message: String },

    /// A config file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Error::Validation {
            field,
            message: message.into(),
        }
    }

    /// True for errors caused by bad input rather than the environment.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Validation { .. } | Error::Parse { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
