use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid root system {family}{rank}")]
    InvalidRootSystem { family: char, rank: usize },

    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("character is not antidominant: coefficient {coeff} on simple root {index}")]
    NotAntidominant { index: usize, coeff: String },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),

    #[error("pairing violation: {0}")]
    PairingViolation(String),

    #[error("section infeasible: {0}")]
    SectionInfeasible(String),

    #[error("nonzero alpha is only meaningful for Sp2nR")]
    NonzeroAlphaUnsupported,

    #[error("invalid pair: {0}")]
    InvalidPair(String),

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("malformed cone normal {0:?}")]
    MalformedNormal(Vec<i64>),

    #[error("cone dimension {0} exceeds the oracle limit")]
    DimensionTooLarge(usize),

    #[error("pair is not semistable")]
    PreconditionUnstable,

    #[error("pair is not polystable ({status})")]
    NotPolystable { status: String },

    #[error("{group} is not semisimple")]
    NonSemisimpleGroup { group: String },

    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(u32),

    #[error("sweep would produce {count} instances, over the budget of {budget}")]
    BudgetExceeded { count: u64, budget: u64 },

    #[error("block {indices} fits no stable factor type")]
    FactorNotStable { indices: String },
}

pub type Result<T> = std::result::Result<T, Error>;
