use thiserror::Error;

/// Errors raised by the vector kernels, oracles and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "evaluation point {index} lies outside the ball (distance {distance} > radius {radius})"
    )]
    OutsideBall {
        index: usize,
        distance: f64,
        radius: f64,
    },

    #[error("not applicable: {0}")]
    Inapplicable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
