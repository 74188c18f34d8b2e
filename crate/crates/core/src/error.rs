use thiserror::Error;

use crate::potential::NegativeCycleWitness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input document or value.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit: {what} is {got}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    /// The pairs are not cyclically monotone, so the weighted sum of
    /// molecules does not attain its total weight as norm.
    #[error("system does not attain its norm: negative cycle with sum {}", crate::rational::render(&.0.sum))]
    NotAttaining(NegativeCycleWitness),

    /// A certificate failed self-verification. Always an implementation bug.
    #[error("certificate verification failed: {0}")]
    Certificate(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
