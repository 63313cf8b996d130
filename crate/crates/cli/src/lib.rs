//! Command implementations behind the `qcoh` binary.
//!
//! Every command is a pure function of its input files, flags and seed. Text
//! reports go to stdout; `--json` variants carry full-precision numbers.

pub mod commands;
pub mod format;

use std::fmt;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable or malformed input.
    Parse(String),
    /// Output could not be written.
    Io(String),
    /// Input parsed but violates a mathematical precondition.
    Validation(String),
}

impl CliError {
    pub fn parse(e: qcoherence::Error) -> Self {
        Self::Parse(e.to_string())
    }

    pub fn validation(e: qcoherence::Error) -> Self {
        Self::Validation(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse(_) | Self::Io(_) => 2,
            Self::Validation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parse(m) => write!(f, "parse error: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
            Self::Validation(m) => write!(f, "validation error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qcoherence::Error> for CliError {
    fn from(e: qcoherence::Error) -> Self {
        Self::validation(e)
    }
}
