use num_rational::BigRational;
use thiserror::Error;

/// Errors raised by the orbifold calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multiplicity below 1: {0}")]
    MultiplicityBelowOne(BigRational),

    #[error("coefficient {0} lies outside [0, 1]")]
    CoefficientOutOfRange(BigRational),

    #[error("non-integral multiplicity {value} for `{label}`")]
    NonIntegral { label: String, value: String },

    #[error("infinite multiplicity not allowed here (`{0}`)")]
    InfiniteNotAllowed(String),

    #[error("gcd is undefined for infinite multiplicities (`{0}`)")]
    GcdWithInfinity(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("`{0}` has no fibre components")]
    EmptyFibre(String),

    #[error("the curve lies inside the support component `{0}`")]
    CurveInsideComponent(String),

    #[error("parametrization has a base point: the coordinate polynomials share the factor {0}")]
    BasePoint(String),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("component `{0}` is not a line")]
    NotALine(String),

    #[error("multiplicity {mult} of `{label}` does not divide degree {degree}")]
    DoesNotDivide { label: String, mult: String, degree: u64 },

    #[error("enumeration of {needed} multi-indices exceeds the configured limit {limit}")]
    LimitExceeded { needed: u128, limit: u128 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
