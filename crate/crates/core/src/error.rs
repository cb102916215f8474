use thiserror::Error;

use crate::polyring::{Polynomial, Rational};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for a ring in {arity} variables")]
    VariableOutOfRange { index: usize, arity: usize },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    /// Raised when an exact division leaves a remainder. Inside the
    /// determinant pipeline this always indicates a bug.
    #[error("internal invariant violated: inexact polynomial division")]
    InexactDivision,

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("Jacobian determinant is not constant: det(J_F) = {0}")]
    NotConstantJacobian(Polynomial),

    #[error("Jacobian determinant is zero")]
    SingularJacobian,

    #[error("Jacobian determinant is {0}, expected 1")]
    NonUnitJacobian(Rational),

    #[error(
        "internal invariant violated: derivations {k} and {i} do not commute on x{j}",
        k = .k + 1, i = .i + 1, j = .j + 1
    )]
    NonCommutingDerivations { k: usize, i: usize, j: usize },

    #[error("step budget exhausted after {steps} reduction steps")]
    BudgetExceeded { steps: u64 },

    #[error("time limit exceeded")]
    TimeLimitExceeded,

    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("component F{0} is defined more than once")]
    DuplicateComponent(usize),

    #[error("component F{0} is missing")]
    MissingComponent(usize),

    #[error("invalid matrix file: {0}")]
    InvalidMatrix(String),
}

impl Error {
    /// `true` for the errors that make a run inconclusive rather than wrong.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::TimeLimitExceeded)
    }
}
