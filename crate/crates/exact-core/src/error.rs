use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("not a direction: the zero vector has no primitive generator")]
    NotADirection,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty region")]
    EmptyRegion,
    #[error("region is unbounded")]
    Unbounded,
    #[error("not strongly convex: the generated cone contains a line")]
    NotStronglyConvex,
    #[error("malformed rational {0:?}: {1}")]
    BadRational(String, &'static str),
}
