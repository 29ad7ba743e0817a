// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the library. Mathematical verdicts are never errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the operation's domain (bad k, mismatched sizes, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested computation exceeds a fixed size budget.
    #[error("capacity exceeded: {what} (limit {limit}, requested {requested}){hint}")]
    Capacity {
        what: &'static str,
        limit: usize,
        requested: usize,
        hint: &'static str,
    },

    /// A non-finite value was supplied where only finite reals make sense.
    #[error("non-finite entry at position {index}")]
    NonFinite { index: usize },

    /// exp(A t) left the representable range.
    #[error("matrix exponential overflowed at t = {t}")]
    Overflow { t: f64 },

    /// An iterative kernel did not converge.
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
