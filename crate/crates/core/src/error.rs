use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The window `s / N^beta` (or half of it for covering statistics) leaves
    /// its admissible range on the circle.
    #[error(
        "scale overflow: s = {s} gives window {window} > {limit} for N = {n}, beta = {beta}; \
         largest admissible s is {max_s}"
    )]
    ScaleOverflow {
        s: f64,
        n: usize,
        beta: f64,
        window: f64,
        limit: f64,
        max_s: f64,
    },

    #[error("too few points for slope estimation: need {needed} grid values in the lowest quarter, found {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("no converged grid points to check")]
    NoConvergedPoints,

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("point file line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
