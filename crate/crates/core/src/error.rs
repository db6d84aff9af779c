use thiserror::Error;

use crate::tau::DerivKey;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A value left the representable floating-point range.
    #[error("{what} out of floating-point range: {value}")]
    Range { what: &'static str, value: f64 },

    /// The derivative engine cannot produce the requested partial.
    #[error("unsupported derivative request {0:?} (engine supports dx<=4, dt<=1, dy<=1)")]
    Capability(DerivKey),

    /// The evaluation point sits on (or numerically at) a zero of a τ function.
    #[error("pole of the solution at x={x}, t={t}")]
    Pole { x: f64, t: f64 },

    /// The logarithm of the τ ratio is taken across a sign change.
    #[error("τ ratio is negative at x={x}, t={t}; θ has no real branch there")]
    Branch { x: f64, t: f64 },

    /// Parameters violate a structural invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested check does not apply to this solution class.
    #[error("{0}")]
    NotApplicable(String),
}
