use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("right-hand side failed at x = {x}: {source}")]
    Evaluation {
        x: f64,
        #[source]
        source: EvalError,
    },

    #[error("singular system: pivot {pivot:e} at row {row}")]
    Singular { row: usize, pivot: f64 },

    #[error("Gauss-Legendre nodes of order {order} did not converge")]
    Convergence { order: usize },

    #[error("iteration n = {n}: {source}")]
    Iteration {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("fixture: {0}")]
    Fixture(String),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// Iteration index attached by the solver, if any.
    pub fn iteration(&self) -> Option<usize> {
        match self {
            Error::Iteration { n, .. } => Some(*n),
            _ => None,
        }
    }
}
