use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field degree h = {0} (supported: 1..=16)")]
    UnsupportedDegree(u32),
    #[error("polynomial {0:#x} is not irreducible of degree {1}")]
    ReducibleModulus(u32, u32),
    #[error("element {0:#x} out of range for GF(2^{1})")]
    ElementOutOfRange(u32, u32),
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("division by zero in GF(2^h)")]
    DivisionByZero,
    #[error("{0} does not divide {1}")]
    NotADivisor(u32, u32),
    #[error("elements are F2-dependent (rank {rank} < {expected})")]
    RankError { rank: usize, expected: usize },
    #[error("subgroup too large to enumerate (rank {0} > 20)")]
    EnumerationGuard(usize),
    #[error("degenerate point configuration: {0}")]
    Degenerate(String),
    #[error("points are not collinear")]
    NotCollinear,
    #[error("point set is not a KM-arc: {0}")]
    NotAKmArc(String),
    #[error("arc of type 2 has no nucleus")]
    NoNucleus,
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("inadmissible tuple: {0}")]
    Inadmissible(String),
    #[error("construction failed the census: {0}")]
    Construction(String),
    #[error("search budget of {budget} candidates exceeded (partial lower bound {lower_bound})")]
    Budget { budget: u64, lower_bound: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
