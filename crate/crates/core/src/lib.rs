//! Exact counting and asymptotic estimation for partial Butson matrices.
//!
//! A partial Butson matrix is an `M x N` matrix over the `q`-th roots of
//! unity whose rows are pairwise orthogonal. This crate represents such
//! matrices by their exponents in `Z_q` and provides:
//!
//! - exact vanishing-sum tests for multisets of roots of unity, via integer
//!   polynomial remainders modulo the cyclotomic polynomial ([`cyclotomic`]);
//! - the matrix data model, dephasing, standard form and a parallel
//!   brute-force census oracle ([`matrices`]);
//! - arbitrary-precision closed-form counters for two- and three-row
//!   matrices ([`census`]), indexed for three rows by tristochastic
//!   matrices ([`tristochastic`]);
//! - exact lattice-walk reformulations and Monte Carlo estimators
//!   ([`walks`]);
//! - floating-point evaluators for the matching large-`N` asymptotics
//!   ([`asymptotics`]).
//!
//! Everything that claims to be exact is exact: counts are big integers,
//! probabilities are integer fractions, and orthogonality is never decided
//! by an epsilon comparison.

pub mod asymptotics;
pub mod census;
pub mod cyclotomic;
mod error;
pub mod matrices;
pub mod primes;
pub mod tristochastic;
pub mod walks;

pub use census::{BigCount, Compositions, FactorialTable};
pub use cyclotomic::{CycleDecomposition, CycleTerm, IntPolynomial, MultiplicityVector};
pub use error::Error;
pub use matrices::{CensusRecord, CountMethod, ExactProbability, ExponentMatrix};
pub use tristochastic::TristochasticMatrix;
pub use walks::{IncrementSampler, McEstimate, WalkDistribution};

/// Default work budget for brute-force censuses, in candidate-row
/// evaluations (`q^((M-1)N)` must not exceed it).
pub const DEFAULT_CENSUS_BUDGET: u64 = 100_000_000;

/// Default state budget for the exact walk dynamic program, in lattice
/// points (`(2N+1)^p` must not exceed it).
pub const DEFAULT_WALK_BUDGET: u64 = 1_500_000;
