use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    /// A positive transmit power was requested with a zero covert budget.
    #[error("covertness cannot be met: {0}")]
    InfeasibleCovertness(String),
    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),
    /// Zero-forcing has no direction left once the warden's channel is removed.
    #[error("null space is empty: {0}")]
    NullSpaceEmpty(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable short tag, used for machine-readable CLI error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::DegenerateGeometry(_) => "degenerate_geometry",
            Error::InfeasibleCovertness(_) => "infeasible_covertness",
            Error::DegenerateChannel(_) => "degenerate_channel",
            Error::NullSpaceEmpty(_) => "null_space_empty",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
