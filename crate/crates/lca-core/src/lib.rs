//! Exact analysis of one-dimensional linear cellular automata over Z_m.
//!
//! A rule is a finitely supported coefficient map `i -> lambda_i` acting on
//! finite configurations by `S(c)_n = sum_i lambda_i c_{n+i}`. The crate
//! represents rules as Laurent polynomials over Z_m, classifies injectivity /
//! surjectivity / invertibility through the prime-power components of m,
//! constructs explicit inverses, and computes algebraic entropy both by the
//! closed formula (component degrees against prime-power logs) and by an
//! independent brute-force trajectory oracle.
//!
//! Entry points:
//! - [`modring::Modulus`], [`modring::Residue`]: exact Z_m arithmetic and CRT data.
//! - [`laurent::LaurentPoly`]: the ring Z_m[X, X^-1].
//! - [`ca::LinearCA`], [`ca::FiniteConfiguration`]: rules and their action.
//! - [`structure`]: decomposition, classification, inverse construction.
//! - [`entropy`]: exact symbolic entropy values.
//! - [`oracle`]: trajectory counting, kernel and preimage search.
//! - [`report`]: the JSON reports emitted by the `lca` binary.

pub mod ca;
pub mod entropy;
pub mod error;
pub mod laurent;
pub mod modring;
pub mod oracle;
pub mod report;
mod snf;
pub mod structure;

pub use ca::{FiniteConfiguration, LinearCA};
pub use entropy::{entropy_of_shift, EntropyValue};
pub use error::{LcaError, Result};
pub use laurent::LaurentPoly;
pub use modring::{crt_combine, Modulus, Residue};
pub use oracle::{
    entropy_slope, kernel_search, preimage_search, trajectory_sizes, trajectory_sizes_partial,
    EntropySlope, TrajectoryMethod, TrajectoryTable, DEFAULT_CLOSURE_BUDGET,
    DEFAULT_SEARCH_BUDGET,
};
pub use structure::{Classification, Permutivity, PrimaryDecomposition, ShiftPowerIdentity};
