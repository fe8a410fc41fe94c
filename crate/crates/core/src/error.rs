use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid cochain: {0}")]
    InvalidCochain(String),
    #[error("coefficient mismatch: {0}")]
    CoefficientMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("denominator {den} does not divide level {level}")]
    LevelMismatch { den: u64, level: u64 },
    #[error("not a cocycle: differential is nonzero at tuple {0}")]
    NotACocycle(String),
    #[error("homomorphism is not surjective")]
    NotSurjective,
    #[error("not equivariant: {0}")]
    NotEquivariant(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("no solution at level {level}: {what}")]
    NoSolution { level: u64, what: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal error: {0}")]
    Internal(String),
}
