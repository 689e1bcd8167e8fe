use thiserror::Error;

/// Errors raised when an input violates an operation's precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element {element} exceeds bound {bound}")]
    OutOfBound { element: usize, bound: usize },

    #[error("prefix length must be at least 1")]
    ZeroLength,

    #[error("parameter {name} = {value} exceeds the supported maximum {max}")]
    TooLarge {
        name: &'static str,
        value: usize,
        max: usize,
    },

    #[error("set array is not strictly ascending at position {position}")]
    Unsorted { position: usize },

    #[error("union of C and D misses {missing} in [0, {m}]")]
    UnionGap { m: usize, missing: usize },

    #[error("0 must belong to C")]
    ZeroNotInC,

    #[error("orientation is not canonical: least non-shared element {element} lies in D")]
    NotCanonical { element: usize },

    #[error("stored intersection {stored:?} differs from recomputed {actual:?}")]
    IntersectionMismatch {
        stored: Vec<usize>,
        actual: Vec<usize>,
    },

    #[error("expected an intersection of size {expected}, found {found}")]
    IntersectionSize { expected: usize, found: usize },

    #[error("m must be positive")]
    ZeroM,

    #[error("0 cannot be a prescribed shared element")]
    ZeroShared,

    #[error("representation functions of C and D differ at n = {n}")]
    Unbalanced { n: usize },

    #[error("no n in (m, 2m) separates the truncated halves for m = {m}")]
    NoWitness { m: u64 },

    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
