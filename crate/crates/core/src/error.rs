use std::path::PathBuf;

use crate::model::{Diagonal, Vertex};
use crate::patterns::Witness312;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse grouping of errors, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The caller handed us something malformed or out of the domain.
    Input,
    /// An internal consistency check failed. These would be counterexamples
    /// to the underlying theorems, so they carry a reproducible witness.
    Internal,
    /// A configured size bound or table limit was exceeded.
    Bound,
    Io,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    PolygonTooSmall(u32),

    #[error("diagonal {0} has an endpoint outside 1..={1}")]
    VertexOutOfRange(Diagonal, u32),

    #[error("{0} is a side of the {1}-gon, not a diagonal")]
    SideAsDiagonal(Diagonal, u32),

    #[error("degenerate diagonal {0}-{0}")]
    DegenerateDiagonal(Vertex),

    #[error("diagonals {0} and {1} cross")]
    CrossingDiagonals(Diagonal, Diagonal),

    #[error("a triangulation of a {n}-gon has {expected} diagonals, got {got}")]
    WrongDiagonalCount { n: u32, expected: usize, got: usize },

    #[error("a dissection of a {n}-gon has at most {max} diagonals, got {got}")]
    TooManyDiagonals { n: u32, max: usize, got: usize },

    #[error("{0}")]
    NotAPermutation(String),

    #[error("not 312-avoiding: {0}")]
    NotAvoiding(Witness312),

    #[error("bad value sets: {0}")]
    BadValueSets(String),

    #[error("not decent: up/down pattern {0} must start and end with D and contain no UU")]
    NotDecent(String),

    #[error("label {label} is outside 1..={max}")]
    LabelOutOfRange { label: u32, max: u32 },

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("enumeration bound exceeded: {what} = {value} > {bound}")]
    BoundExceeded {
        what: &'static str,
        value: u32,
        bound: u32,
    },

    #[error("a dissection of a {n}-gon cannot have {d} diagonals")]
    BadDiagonalCount { n: u32, d: u32 },

    #[error("inverse table limit exceeded: permutation length {n} > limit {limit}")]
    LimitExceeded { n: usize, limit: usize },

    #[error("internal invariant violated: {message} (witness: {witness})")]
    InvariantViolation { message: String, witness: String },

    #[error(
        "removed triangle {triangle} for label {label} is an inner triangle (witness: {witness})"
    )]
    InnerTriangle {
        label: u32,
        triangle: String,
        witness: String,
    },

    #[error("no decent preimage for dissection {0}")]
    NoPreimage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvariantViolation { .. }
            | Error::InnerTriangle { .. }
            | Error::NoPreimage(_) => ErrorClass::Internal,
            Error::BoundExceeded { .. } | Error::LimitExceeded { .. } => ErrorClass::Bound,
            Error::Io { .. } => ErrorClass::Io,
            _ => ErrorClass::Input,
        }
    }

    pub(crate) fn invariant(message: impl Into<String>, witness: impl ToString) -> Self {
        Error::InvariantViolation {
            message: message.into(),
            witness: witness.to_string(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
