use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid base {0}: base must be at least 2")]
    InvalidBase(u64),

    #[error("the distribution of X_0 is empty (n must be at least 1)")]
    EmptyDistribution,

    #[error("brute-force oracle limited to n <= {cap}, got n = {n}")]
    OracleRange { n: String, cap: u64 },

    #[error("support violation at k = {0}: first law has mass where the second has none")]
    SupportViolation(i64),

    #[error("comparator undefined: {0}")]
    UndefinedComparator(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("polynomial degree {degree} exceeds N = {n}")]
    Degree { degree: usize, n: usize },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("coding system `{0}` is not certified for closed-form routes")]
    Uncertified(String),

    #[error("independent routes disagree: {0}")]
    RouteMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}
