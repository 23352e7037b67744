use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state is not normalized: squared norm {norm_sqr}")]
    Normalization { norm_sqr: f64 },

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    #[error("singular denominator: {0}")]
    SingularDenominator(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: String, found: String },

    #[error("integration failed at t = {t_reached}: {reason}")]
    IntegrationFailure { t_reached: f64, reason: String },

    /// Scenario configuration problem tied to a particular field.
    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad user input (as opposed to numerical
    /// failures or I/O).
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::Normalization { .. }
                | Error::DegenerateParameters(_)
                | Error::SingularDenominator(_)
                | Error::Configuration(_)
                | Error::BasisMismatch { .. }
                | Error::Config { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
