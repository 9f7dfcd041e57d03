use thiserror::Error;

/// Errors raised by the exact-arithmetic routines in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operand shapes are incompatible. `op` names the operation that complained.
    #[error("{op}: shape mismatch (expected {expected}, found {found})")]
    Shape {
        op: &'static str,
        expected: String,
        found: String,
    },

    /// A square matrix that had to be inverted is singular. Carries the rank found.
    #[error("matrix of order {order} is singular (rank {rank})")]
    Singular { order: usize, rank: usize },

    /// One side of a PTE solution does not have full row rank.
    #[error("side {side} has rank {rank}, expected {expected}")]
    RankDeficient {
        side: char,
        rank: usize,
        expected: usize,
    },

    /// A pair of multisets failed a power-sum identity where one was required.
    #[error("power-sum identity violated: {0}")]
    PteViolation(String),

    /// A precondition on the input was not satisfied.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A matrix was expected to lie in a group and does not.
    #[error("not a member: {0}")]
    NotMember(String),

    /// The conjugated element does not have the block shape diag(1, B').
    #[error("block structure violated: {0}")]
    BlockStructure(String),

    /// No Cayley certificate was found within the configured search.
    #[error("no Cayley certificate found after {tried} permutations")]
    DecomposeExhausted { tried: usize },

    /// A point does not lie on the quadric x^T Q x = r.
    #[error("point {index} is off the quadric: value {value}, expected {radius}")]
    OffQuadric {
        index: usize,
        value: String,
        radius: String,
    },

    /// The gram matrix is not symmetric positive definite.
    #[error("not a positive definite symmetric form: {0}")]
    NotPositiveDefinite(String),

    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
