use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or input violated a documented constraint.
    #[error("invalid input: {0}")]
    Validation(String),

    /// An enumeration would exceed its configured work budget.
    #[error("budget exceeded: {what} needs {needed:.3e} terms, budget is {budget:.3e}")]
    Budget { what: String, needed: f64, budget: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Process exit code used by the CLI: 2 for validation/parse problems,
    /// 3 for budget guards, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Parse { .. } => 2,
            Error::Budget { .. } => 3,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Validation(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
