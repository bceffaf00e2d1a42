use thiserror::Error;

use crate::combinatorics::Partition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("diagram size {size} exceeds the configured budget {budget}")]
    BudgetExceeded { size: usize, budget: usize },

    #[error("Jack normalization failed for {lambda}: coefficient of p[1^n] is {found}")]
    NormalizationFailure { lambda: Partition, found: String },

    #[error("size mismatch: |{pi}| != |{lambda}|")]
    SizeMismatch { pi: Partition, lambda: Partition },

    #[error("no hard-coded content formula for {0}")]
    UnsupportedPartition(Partition),

    #[error("linear system is inconsistent: {context}")]
    Inconsistent { context: String },

    #[error("linear system is underdetermined ({free} free directions): {context}")]
    Underdetermined { free: usize, context: String },

    #[error("verification failed on held-out diagram {lambda}: {context}")]
    VerifyFailure { lambda: Partition, context: String },

    #[error("interpolation data exceeds degree {max_degree}")]
    DegreeExceeded { max_degree: usize },

    #[error("polynomial fit failed: {0}")]
    FitFailure(String),

    #[error("kernel reconstruction mismatch at {0}")]
    ReconstructionMismatch(Partition),

    #[error("degenerate transition measure for {0}")]
    Degenerate(Partition),

    #[error("moment {order} of {lambda} is not a Laurent polynomial")]
    NonPolynomial { lambda: Partition, order: usize },

    #[error("rank {rank} is smaller than |{pi}|")]
    RankTooSmall { pi: Partition, rank: usize },

    #[error("rank {rank} exceeds the group-algebra budget {budget}")]
    RankBudget { rank: usize, budget: usize },

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}
