use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("certificate failure: {0}")]
    Certificate(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The Tate limit did not converge inside the doubling budget. The
    /// partial estimate is the last iterate.
    #[error("height budget exhausted after {doublings} doublings (partial estimate {partial} ± {error_bound})")]
    HeightBudget {
        partial: f64,
        error_bound: f64,
        doublings: usize,
    },

    #[error("ledger error: {0}")]
    Ledger(String),

    /// Two independent criteria that must agree did not.
    #[error("diagnostic: {0}")]
    Diagnostic(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn certificate(msg: impl Into<String>) -> Self {
        Error::Certificate(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn ledger(msg: impl Into<String>) -> Self {
        Error::Ledger(msg.into())
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Ledger(_) => 2,
            Error::Certificate(_) | Error::Diagnostic(_) => 3,
            Error::Resource(_) | Error::HeightBudget { .. } => 4,
        }
    }
}
