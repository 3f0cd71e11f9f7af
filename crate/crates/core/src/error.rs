use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("epsilon mismatch: {left} vs {right}")]
    EpsilonMismatch { left: String, right: String },

    #[error("coordinate axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i32, found: i32 },

    #[error("superfunction has terms of mixed generalized degree ({first} and {second})")]
    Inhomogeneous { first: i32, second: i32 },

    #[error("cannot infer the degree of the zero superfunction")]
    AmbiguousDegree,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{pointer}: {msg}")]
    Schema { pointer: String, msg: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn schema(pointer: &str, msg: impl Into<String>) -> Self {
        let pointer = if pointer.is_empty() { "/".to_string() } else { pointer.to_string() };
        Error::Schema { pointer, msg: msg.into() }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

pub(crate) fn check_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
