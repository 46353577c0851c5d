//! Crate-wide error type.

/// Errors produced by numeric kernels, estimators, and data validation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter violated an operation's domain (e.g. `τ = 0`, `c ≤ b` in a
    /// ₂F₁ integral representation, probability outside `(0,1)`).
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// An iterative scheme (series, continued fraction, quadrature
    /// refinement, EM, optimizer) exhausted its iteration budget before
    /// reaching its tolerance.
    #[error("{op}: no convergence within {limit} iterations")]
    NoConvergence { op: &'static str, limit: usize },

    /// 2-means clustering was asked to split a constant weight vector; there
    /// is no data-driven threshold in that case.
    #[error("degenerate clustering: all {n} weights are identical")]
    DegenerateClustering { n: usize },

    /// An operation that needs observations received an empty dataset.
    #[error("empty dataset in {op}")]
    EmptyData { op: &'static str },

    /// Two paired vectors disagree in length.
    #[error("length mismatch in {op}: {left} vs {right}")]
    LengthMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },

    /// Invalid dataset contents (non-finite exposure, exposure ≤ 0, …).
    #[error("invalid data: {msg}")]
    InvalidData { msg: String },
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;
