use thiserror::Error;

/// Problems with the scenario itself; these abort before any operation runs.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown {kind} {name:?}")]
    UnknownName { kind: &'static str, name: String },
    #[error("duplicate {kind} {name:?}")]
    Duplicate { kind: &'static str, name: String },
    #[error("validation failed ({invariant}): {message}")]
    Validation { invariant: &'static str, message: String },
    #[error("no scenario file or built-in named {0:?}")]
    NotFound(String),
}

impl InputError {
    pub fn validation(invariant: &'static str, message: impl ToString) -> Self {
        InputError::Validation {
            invariant,
            message: message.to_string(),
        }
    }
}
