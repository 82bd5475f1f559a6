use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate basis")]
    DegenerateBasis,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a lattice subspace")]
    NotLatticeSubspace,
    #[error("empty set has no doubling factor")]
    EmptySet,
    #[error("GAP too large to enumerate ({size} > cap {cap})")]
    GapTooLarge { size: u128, cap: u128 },
    #[error("conversion requires even side lengths")]
    OddSideLength,
    #[error("invalid GAP: {0}")]
    InvalidGap(String),
    #[error("restriction coordinate out of bounds: {0}")]
    RestrictionOutOfBounds(String),
    #[error("Claim 1 requires a symmetric body")]
    AsymmetricBody,
    #[error("lemma hypothesis det ≤ 1 violated")]
    DeterminantTooLarge,
    #[error("hypothesis r ≥ R not met")]
    RadiusBelowHypothesis,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
