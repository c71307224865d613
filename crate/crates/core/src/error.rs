use thiserror::Error;

/// Errors produced by the engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter is outside the range an operation accepts.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An enumeration would exceed its configured work budget.
    #[error("budget exceeded for {what}: needs {required}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: String,
        budget: String,
    },

    /// A mathematical function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn budget(what: &'static str, required: impl ToString, budget: impl ToString) -> Self {
        Error::BudgetExceeded {
            what,
            required: required.to_string(),
            budget: budget.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
