use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate truncation: {dist} has zero truncated variance at t = {t}")]
    DegenerateTruncation { dist: &'static str, t: f64 },

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    SolverFailure { index: usize, iterations: usize },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("unknown method: {0}")]
    UnknownMethod(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
