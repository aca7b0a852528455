use std::fmt;

use serde_json::json;

/// Anything that stops a command. Printed to stderr as one JSON object.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or config; nothing was computed.
    Validation(String),
    /// The numerical core refused or failed.
    Numerical(transmute_core::Error),
    Io(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Validation(_) => "validation",
            Self::Numerical(_) => "numerical",
            Self::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) => 2,
            Self::Numerical(_) => 3,
            Self::Io(_) => 4,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Validation(m) | Self::Io(m) => f.write_str(m),
            Self::Numerical(e) => write!(f, "{e}"),
        }
    }
}

impl From<transmute_core::Error> for CliError {
    fn from(e: transmute_core::Error) -> Self {
        match e {
            // argument-shaped core errors are still the caller's fault
            transmute_core::Error::InvalidGrid(_)
            | transmute_core::Error::InvalidArgument(_)
            | transmute_core::Error::Domain(_) => Self::Validation(e.to_string()),
            other => Self::Numerical(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Validation(msg.into()))
}
