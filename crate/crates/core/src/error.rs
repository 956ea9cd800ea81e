use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the computational modules.
///
/// The CLI maps [`Error::is_input`] failures to exit code 2 and everything
/// else to exit code 3.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown {kind} '{name}' (available: {available})")]
    Unknown {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// True for errors caused by user input rather than by a failed internal check.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::Dimension { .. }
                | Error::Input(_)
                | Error::Parse { .. }
                | Error::Unknown { .. }
                | Error::Config(_)
        )
    }

    pub(crate) fn unknown(kind: &'static str, name: &str, available: &[String]) -> Self {
        Error::Unknown {
            kind,
            name: name.to_string(),
            available: available.join(", "),
        }
    }
}
