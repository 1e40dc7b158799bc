use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("invalid field specification: {0}")]
    InvalidField(String),
    #[error("value cannot be certified at the available precision (attempted index {attempted})")]
    BelowPrecision { attempted: i64 },
    #[error("series is not a p-th power (nonzero coefficient at index {index})")]
    NotAPthPower { index: i64 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is constant in X")]
    ConstantPolynomial,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("reduced polynomial has height 1")]
    DegenerateHeight,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("selected Cartier image is constant in X")]
    ConstantCollapse,
    #[error("polynomial has no root in the base field")]
    NoBaseRoot,
    #[error("Newton condition |P(a)| < |P'(a)|^2 fails")]
    NewtonConditionFailed,
    #[error("no base-field root matches the branch selector")]
    NoSuchBranch,
    #[error("minimal polynomial is reducible")]
    Reducible,
    #[error("too few partial quotients")]
    TooFewQuotients,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
}

pub type Result<T> = std::result::Result<T, Error>;
