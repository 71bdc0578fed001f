use num_bigint::BigUint;
use thiserror::Error;

/// Errors reported by the counting and estimation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An exhaustive computation would exceed the configured work budget.
    /// `required` names the number of candidate evaluations (or lattice
    /// states) the computation would need.
    #[error("work budget exceeded: {required} {unit} needed, budget is {budget}")]
    BudgetExceeded {
        required: BigUint,
        budget: u64,
        unit: &'static str,
    },

    /// A closed-form counter was asked about a modulus outside its family.
    #[error("no closed form for {what}: {hint}")]
    UnsupportedFamily { what: String, hint: String },

    /// A multinomial coefficient was requested with parts that do not sum
    /// to the declared total.
    #[error("composition parts sum to {got}, expected {expected}")]
    CompositionMismatch { expected: u64, got: u64 },

    /// Matrix input with inconsistent or unusable dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An argument was outside the function's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed serialized matrix.
    #[error("parse error: {0}")]
    Parse(String),
}
