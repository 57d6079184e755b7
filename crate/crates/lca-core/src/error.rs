//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, LcaError>;

#[derive(Debug, Error)]
pub enum LcaError {
    /// Modulus outside the supported range (m >= 2).
    #[error("invalid modulus {0}: must satisfy 2 <= m <= 2^63 - 1")]
    InvalidModulus(u64),

    /// Two values from different ambient rings were combined.
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    /// Component index past the number of prime-power factors.
    #[error("component index {index} out of range (modulus has {count} components)")]
    ComponentIndex { index: usize, count: usize },

    /// CRT recombination got the wrong number of parts.
    #[error("expected {expected} CRT components, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    /// Inversion of a residue that shares a factor with the modulus.
    #[error("{value} is not a unit mod {modulus} (gcd = {gcd})")]
    NotAUnit { value: u64, modulus: u64, gcd: u64 },

    /// The rule fails the per-component unique-unit-coefficient criterion.
    #[error(
        "rule is not invertible: component {component} has {supp_star_len} unit coefficient(s), need exactly 1"
    )]
    NotInvertible {
        component: usize,
        supp_star_len: usize,
    },

    /// Operation is only defined over a prime-power modulus.
    #[error("modulus {0} is not a prime power")]
    CompositeModulus(u64),

    /// Operation requires a nonzero rule.
    #[error("operation is undefined for the zero rule")]
    ZeroRule,

    /// A brute-force search or enumeration exceeded its resource budget.
    #[error("resource budget exceeded: {what} needs more than {limit}")]
    Budget { what: String, limit: u64 },

    /// Trajectory table too short for slope estimation.
    #[error("trajectory table has {0} steps, need at least 3")]
    TableTooShort(usize),

    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Semantically invalid input data (e.g. out-of-range coefficient).
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl LcaError {
    /// Process exit code used by the CLI: 1 parse/usage, 2 semantic, 3 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            LcaError::Parse(_) => 1,
            LcaError::Budget { .. } => 3,
            _ => 2,
        }
    }
}
