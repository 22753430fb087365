use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative exponent outside a Laurent context")]
    NegativeExponent,
    #[error("laurent pole")]
    LaurentPole,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid triplet: {0}")]
    InvalidTriplet(String),
    #[error("chi zero")]
    ChiZero,
    #[error("arm {0} is empty (a_{0} = 1); supply an explicit normalization term")]
    DegenerateArm(usize),
    #[error("S-pair queue exceeded the bound of {0} pairs")]
    ResourceLimit(usize),
    #[error("infinite-dimensional quotient")]
    InfiniteQuotient,
    #[error("Hessian not invertible")]
    HessianNotInvertible,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("truncation too small: D = {d} but at least {required} is needed")]
    TruncationTooSmall { d: u32, required: u32 },
    #[error("underdetermined at level ({k},{d})")]
    Underdetermined { k: u32, d: u32 },
    #[error("inconsistent at level ({k},{d})")]
    Inconsistent { k: u32, d: u32 },
    #[error("potential has unresolved coefficients")]
    Unresolved,
    #[error("degenerate metric at point")]
    DegenerateMetric,
    #[error("inconsistent recovery: {0}")]
    InconsistentRecovery(String),
    #[error("singular Cartan matrix (chi=0)")]
    SingularCartan,
    #[error("invalid vertex {0}")]
    InvalidVertex(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("rational q requires a complete potential")]
    IncompletePotential,
}

pub type Result<T> = std::result::Result<T, Error>;
