use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integration did not converge: {what} (estimate {estimate:e}, error {error:e})")]
    Convergence {
        what: String,
        estimate: f64,
        error: f64,
    },

    #[error("overflow: {0}")]
    Overflow(String),

    /// A quantity underflowed to zero where a positive value is required.
    #[error("underflow: {0}")]
    Underflow(String),

    /// Internal inconsistency detected, e.g. a difference that must be
    /// positive came out negative beyond rounding.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! ensure_domain {
    ($cond:expr, $($arg:tt)+) => {
        if !($cond) {
            return Err($crate::error::Error::Domain(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure_domain;
