use thiserror::Error;

/// Errors surfaced by the library. Input problems map to CLI exit code 2,
/// window/domain limits are reported rather than guessed around.
#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("projection level {level} out of range for arity {arity}")]
    ProjectionRange { level: usize, arity: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("ball of radius {radius} exceeds the element cap {cap}")]
    BallCapExceeded { radius: u32, cap: usize },

    #[error("length value not defined for `{0}`")]
    OutsideDomain(String),

    #[error("outside the materialized window: {0}")]
    OutOfWindow(String),

    #[error("`{element}` is not in the associated subgroup at level {level}: {detail}")]
    NotAssociated {
        element: String,
        level: usize,
        detail: String,
    },

    #[error("coset tree construction refused at level {level}: {detail}")]
    TreeRefused { level: usize, detail: String },

    #[error("invalid model document: {0}")]
    Document(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
