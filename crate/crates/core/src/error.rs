use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point not in space: {0}")]
    UnknownPoint(String),

    #[error("point index {index} out of range for a space of {size} points")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("subspaces belong to different metric spaces")]
    MismatchedParents,

    #[error("invalid radius {0}: must be positive and finite")]
    InvalidRadius(f64),

    #[error("ball too large: exploration exceeded {cap} elements")]
    BallTooLarge { cap: usize },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("dimension uncertain: enumeration capped at dimension {0}")]
    DimensionUncertain(usize),

    #[error("already 1-dimensional")]
    AlreadyOneDimensional,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid scales: {0}")]
    InvalidScales(String),

    #[error("disjointness exhausted at {node}: r = {r} is not larger than 2t = {two_t}")]
    DisjointnessExhausted { node: String, r: f64, two_t: f64 },

    #[error("target {target} is not contained in the {t}-neighborhood of part {part}")]
    TargetNotContained { target: usize, part: usize, t: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
