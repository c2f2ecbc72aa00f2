use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} lies outside the admissible range{}", fmt_index(.index))]
    OutOfRange { value: f64, index: Option<usize> },
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("reference law is not a lattice law")]
    NotLattice,
    #[error("reference law is a lattice law")]
    IsLattice,
    #[error("variance must be positive")]
    NonPositiveVariance,
    #[error("order {0} is not supported")]
    UnsupportedOrder(usize),
    #[error("set has infinite rate everywhere")]
    NotAdmissible,
    #[error("sector has zero surface measure")]
    DegenerateSector,
    #[error("budget exceeded: {needed:.3e} operations requested, limit {limit:.3e}")]
    BudgetExceeded { needed: f64, limit: f64 },
    #[error("no sample passed the conditioning event")]
    ZeroAcceptance,
    #[error("too many variables: {0} (at most 9)")]
    TooManyVariables(usize),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("weights must be nonnegative")]
    NonPositiveWeights,
    #[error("partition function vanishes at n = {0}")]
    ZeroPartitionFunction(usize),
    #[error("probability p must lie strictly between 0 and 1")]
    DegenerateP,
    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("negative mass {0:.3e} on a partition")]
    NotPositive(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
}

fn fmt_index(i: &Option<usize>) -> String {
    match i {
        Some(i) => format!(" (element {i})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
