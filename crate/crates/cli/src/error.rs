use std::fmt;

use geodepth::Error;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_SAMPLER: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    /// Wraps a library error with a location prefix.
    pub fn context(err: Error, prefix: impl fmt::Display) -> Self {
        CliError {
            code: exit_code(&err),
            message: format!("{prefix}: {}", err.root()),
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err.root() {
        Error::CutLocus
        | Error::DegenerateSample(_)
        | Error::ZeroMad
        | Error::NoValidPole
        | Error::CoincidentPoints => EXIT_DEGENERATE,
        Error::RejectionStall { .. } | Error::InvalidSampler(_) => EXIT_SAMPLER,
        _ => EXIT_VALIDATION,
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError {
            code: exit_code(&err),
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::validation(err.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult<T> = Result<T, CliError>;
