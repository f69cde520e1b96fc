use thiserror::Error;

/// Exit codes of the `cogcap` binary.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const VERIFICATION_FAILED: u8 = 1;
    pub const INVALID_INPUT: u8 = 2;
    pub const INDETERMINATE: u8 = 3;
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message}")]
pub struct CliError {
    pub exit_code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            exit_code: exit::INVALID_INPUT,
            message: message.into(),
        }
    }
}

impl From<cogcap::Error> for CliError {
    fn from(e: cogcap::Error) -> Self {
        let exit_code = match e {
            cogcap::Error::IndeterminateCapacity => exit::INDETERMINATE,
            _ => exit::INVALID_INPUT,
        };
        Self {
            exit_code,
            message: e.to_string(),
        }
    }
}
