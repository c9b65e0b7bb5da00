use thiserror::Error;

use crate::exprlang::ExprError;

/// Errors produced by the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A function argument lies outside its mathematical domain.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// Malformed or inconsistent input (lengths, ranges, formats).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Newton refinement of a quadrature node did not settle.
    #[error("node computation failed for n={n}, alpha={alpha}, beta={beta}: {detail}")]
    NodeComputation {
        n: usize,
        alpha: f64,
        beta: f64,
        detail: String,
    },

    /// The collocation matrix is numerically singular.
    #[error(
        "singular collocation system (N={n}, lambda={lambda}): pivot {pivot:e} below {threshold:e}"
    )]
    Singular {
        n: usize,
        lambda: f64,
        pivot: f64,
        threshold: f64,
    },

    /// A problem definition violates the standing assumptions.
    #[error("invalid problem: {}", .0.join("; "))]
    InvalidProblem(Vec<String>),

    /// A coefficient, kernel or exact-solution expression failed.
    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("problem has no exact solution: {0}")]
    MissingExact(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
