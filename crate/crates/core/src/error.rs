use thiserror::Error;

use crate::geometry::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no fraction with denominator at most {qmax} in ({lo}, {hi}]")]
    NotFound { lo: String, hi: String, qmax: u64 },

    /// Brute-force oracles refuse inputs beyond the scale they can finish on.
    #[error("{what} = {value} exceeds oracle limit {limit}")]
    OracleScale {
        what: &'static str,
        value: String,
        limit: u64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid polygon: {0}")]
    Invalid(#[from] Violation),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
