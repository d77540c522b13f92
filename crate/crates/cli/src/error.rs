use std::fmt;

use qcharge::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_OTHER: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_NOT_CONVERGED: u8 = 4;
pub const EXIT_IO: u8 = 5;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Io(String),
    Core(Error),
    /// Output was produced but the optimizer did not converge.
    NotConverged,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Io(_) => EXIT_IO,
            CliError::NotConverged => EXIT_NOT_CONVERGED,
            CliError::Core(Error::SpectraMismatch { .. }) => EXIT_MISMATCH,
            CliError::Core(Error::InvalidConfig(_)) => EXIT_PARSE,
            CliError::Core(_) => EXIT_OTHER,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::NotConverged => write!(f, "optimizer did not converge; result printed above"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
