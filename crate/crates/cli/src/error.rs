use certquad::{QuadError, SpaceKind};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown function `{0}` (try `certquad list`)")]
    UnknownFunction(String),

    #[error("function `{function}` maps into {native}, not {requested}")]
    SpaceMismatch {
        function: String,
        native: SpaceKind,
        requested: SpaceKind,
    },

    #[error("invalid --{flag} value `{value}`: {reason}")]
    BadValue {
        flag: &'static str,
        value: String,
        reason: String,
    },

    #[error(transparent)]
    Quad(#[from] QuadError),

    #[error("self-check failed: actual error {actual} exceeds certified bound {bound}")]
    SelfCheck { actual: f64, bound: f64 },

    #[error("cannot write report: {0}")]
    Output(String),
}

impl CliError {
    /// Process exit code: 2 for invalid input, 1 for a failed self-check
    /// or an output failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::SelfCheck { .. } | CliError::Output(_) => 1,
            _ => 2,
        }
    }
}
