use thiserror::Error;

use crate::explorer::Element;
use crate::isometry::ClassTag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("the point at infinity is not supported by this operation")]
    InfinityNotSupported,

    #[error("point lies on the Cayley pole (1, 0, ..., 0)")]
    Pole,

    #[error("point lies outside the closed unit ball")]
    OutsideClosedBall,

    #[error("matrix does not preserve the form: residual {residual:.3e} exceeds {allowed:.3e}")]
    NotUnitary { residual: f64, allowed: f64 },

    #[error("eigen-analysis is numerically ambiguous between {candidates:?}")]
    NumericallyAmbiguous { candidates: Vec<ClassTag> },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("mode unavailable: {0}")]
    ModeUnavailable(String),

    #[error("state budget of {limit} classes exceeded ({} classes kept)", partial.len())]
    BudgetExceeded {
        limit: usize,
        partial: Box<Vec<Element>>,
    },

    #[error("search exhausted at stage `{stage}` (bound {bound})")]
    SearchExhausted { stage: &'static str, bound: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
