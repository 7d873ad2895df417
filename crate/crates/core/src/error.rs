use thiserror::Error;

/// Errors raised by the library. Every variant names the invariant that failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-commuting square at {point:?} on axes {i} and {j}")]
    NonCommuting { point: Vec<i64>, i: usize, j: usize },
    #[error("points {0:?} and {1:?} are not comparable")]
    NotComparable(Vec<i64>, Vec<i64>),
    #[error("box does not determine the input: {0}")]
    BoxNotDetermining(String),
    #[error("invalid lattice box: {0}")]
    InvalidBox(String),
    #[error("invalid face: {0}")]
    InvalidFace(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("not an upset: {0}")]
    NotAnUpset(String),
    #[error("not a downset: {0}")]
    NotADownset(String),
    #[error("poset morphism is not order preserving: {0}")]
    NotOrderPreserving(String),
    #[error("target mismatch: {0}")]
    TargetMismatch(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("illegal nonzero entry at row {row}, column {col}: labels do not meet")]
    IllegalNonzeroEntry { row: usize, col: usize },
    #[error("invalid fringe presentation: {0}")]
    InvalidFringe(String),
    #[error("injective hull construction failed: {0}")]
    HullConstructionFailed(String),
    #[error("vector is not in the generator space: {0}")]
    NotInGenSpace(String),
    #[error("empty interval: {0}")]
    EmptyInterval(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
