use std::fmt;

use semiframe_core::Error as CoreError;

/// Failures surfaced by the scenario layer and the CLI.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// The scenario text is not well-formed.
    #[error("parse error{}: {message}", location(.line, .column))]
    Parse {
        message: String,
        line: Option<usize>,
        column: Option<usize>,
    },

    /// The scenario parses but violates an invariant.
    #[error("validation error in `{field}`: {invariant}")]
    Validation { field: String, invariant: String },

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("report serialization failed: {0}")]
    Serialize(String),
}

fn location(line: &Option<usize>, column: &Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {l}, column {c}"),
        (Some(l), None) => format!(" at line {l}"),
        _ => String::new(),
    }
}

/// Process exit status for each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 2,
    Numerical = 3,
    Invariant = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn for_core(e: &CoreError) -> Self {
        if e.is_invariant_violation() {
            ExitStatus::Invariant
        } else if e.is_numerical() {
            ExitStatus::Numerical
        } else {
            ExitStatus::Usage
        }
    }
}

impl RunError {
    pub fn exit_status(&self) -> ExitStatus {
        match self {
            RunError::Parse { .. } | RunError::Validation { .. } | RunError::Io { .. } => ExitStatus::Usage,
            RunError::Core(e) => ExitStatus::for_core(e),
            RunError::Serialize(_) => ExitStatus::Invariant,
        }
    }

    pub fn validation(field: impl Into<String>, invariant: impl fmt::Display) -> Self {
        RunError::Validation {
            field: field.into(),
            invariant: invariant.to_string(),
        }
    }
}

pub type RunResult<T> = Result<T, RunError>;
