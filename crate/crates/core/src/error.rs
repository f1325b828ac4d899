use thiserror::Error;

/// Errors produced by the library.
///
/// The variants are grouped by what a caller can do about them: bad input
/// (`Input`, `VertexOutOfRange`, `Parse`), a request that cannot be honored for
/// the given parameters (`Validation`), a computation that exceeded its budget
/// (`Budget`, `NonConvergence`), and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("eigensolver did not converge after {iterations} iterations (last change {last_change:e})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(vec![msg.into()])
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
