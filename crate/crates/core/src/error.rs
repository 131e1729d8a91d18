use thiserror::Error;

/// Errors raised by the lattice machinery.
///
/// Two families are kept apart: rejected input (the caller handed us
/// something outside an operation's domain) and invariant violations
/// (a postcondition failed on valid input, which means a bug here).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vectors live in different ambient lattices")]
    AmbientMismatch,

    #[error("gram matrix is not symmetric")]
    NotSymmetric,

    #[error("bilinear form is degenerate")]
    Degenerate,

    #[error("embedding does not preserve the form: {0}")]
    NotIsometric(String),

    #[error("sublattice is not saturated (primitive) in its ambient lattice")]
    NotSaturated,

    #[error("not contained: {0}")]
    NotContained(String),

    #[error("sublattice has infinite index (rank {sub} inside rank {sup})")]
    InfiniteIndex { sub: usize, sup: usize },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("Mukai vector is not admissible: {0}")]
    NotAdmissible(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invariant violation (this is a bug): {0}")]
    InvariantViolation(String),
}

impl Error {
    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for the "this is a bug" family; everything else is bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
