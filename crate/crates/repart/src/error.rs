//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by kernel evaluation, quadrature, optimization and the
/// verification harness.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Panel refinement ran out of budget before reaching the requested
    /// tolerance.
    #[error("quadrature failed to converge: achieved {achieved:e}, requested {requested:e} ({panels} panels)")]
    Convergence {
        achieved: f64,
        requested: f64,
        panels: usize,
    },

    /// A big-float computation would cancel away more digits than the
    /// precision context can spare.
    #[error("insufficient precision: {needed} digits needed, {available} available")]
    PrecisionInsufficient { needed: u32, available: u32 },

    /// The inequality harness found a trial with slack below the negative
    /// tolerance. This indicts the implementation, not the theorem.
    #[error("inequality violated: slack {slack:e} at n={n}, p={p}, |z|={r}")]
    Violation { slack: f64, n: u32, p: String, r: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
