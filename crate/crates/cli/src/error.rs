use thiserror::Error;

use arith_lg_core::connalg::ConnError;
use arith_lg_core::expsum::ExpSumError;
use arith_lg_core::ffield::FieldError;
use arith_lg_core::frobdata::FrobError;
use arith_lg_core::laurent::LaurentError;

/// Failures that stop a command before it reaches a verdict.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Budget(String),
    /// Two independent computations disagreed.
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

impl CliError {
    pub fn input(path: impl Into<String>, message: impl ToString) -> CliError {
        CliError::Input {
            path: path.into(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => 2,
            CliError::Budget(_) => 3,
            CliError::CrossCheck(_) => 1,
        }
    }
}

impl From<ExpSumError> for CliError {
    fn from(e: ExpSumError) -> Self {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else if let ExpSumError::CrossCheck { .. } = e {
            CliError::CrossCheck(e.to_string())
        } else {
            CliError::input("arguments", e)
        }
    }
}

impl From<LaurentError> for CliError {
    fn from(e: LaurentError) -> Self {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else {
            CliError::input("arguments", e)
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::input("arguments", e),
        }
    }
}

impl From<FrobError> for CliError {
    fn from(e: FrobError) -> Self {
        if e.is_budget() {
            return CliError::Budget(e.to_string());
        }
        match e {
            FrobError::ExpSum(inner) => inner.into(),
            other => CliError::input("arguments", other),
        }
    }
}

impl From<ConnError> for CliError {
    fn from(e: ConnError) -> Self {
        match e {
            ConnError::Parse { path, message } => CliError::Input { path, message },
            ConnError::Inconsistent(m) => CliError::CrossCheck(m),
            other => CliError::input("input", other),
        }
    }
}
