//! CLI error type with the exit-code mapping: 0 success, 1 verification
//! failure, 2 config error, 3 validity-domain error.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Config { line: usize, msg: String },
    Validity(String),
    Verification { failed: usize },
    Io(std::io::Error),
    Core(moyal_core::Error),
}

impl CliError {
    pub fn config(line: usize, msg: String) -> Self {
        CliError::Config { line, msg }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Validity(_) => 3,
            CliError::Verification { .. } => 1,
            CliError::Io(_) => 1,
            CliError::Core(moyal_core::Error::OutsideValidity { .. }) => 3,
            CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { line: 0, msg } => write!(f, "config error: {msg}"),
            CliError::Config { line, msg } => write!(f, "config error (line {line}): {msg}"),
            CliError::Validity(msg) => write!(f, "validity error: {msg}"),
            CliError::Verification { failed } => write!(f, "{failed} verification check(s) failed"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<moyal_core::Error> for CliError {
    fn from(e: moyal_core::Error) -> Self {
        CliError::Core(e)
    }
}
