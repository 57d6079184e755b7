//! Closed-form algebraic entropy of a rule and topological entropy of its
//! dual, as exact symbolic values.
//!
//! An entropy is stored as the list of (prime power, degree) pairs coming out
//! of the primary decomposition; two values are equal exactly when the big
//! integers prod m_i^{d_i} agree, so comparisons never touch floating point.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::ca::LinearCA;
use crate::modring::Modulus;

/// sum d_i * log(m_i), kept in exact (base, degree) form. The floating
/// `nats()` view uses the natural logarithm.
#[derive(Clone, Debug)]
pub struct EntropyValue {
    terms: Vec<(u64, u64)>,
}

impl EntropyValue {
    pub fn from_terms<I: IntoIterator<Item = (u64, u64)>>(terms: I) -> Self {
        EntropyValue {
            terms: terms.into_iter().collect(),
        }
    }

    pub fn zero() -> Self {
        EntropyValue { terms: Vec::new() }
    }

    /// (prime power, degree) pairs in component order.
    pub fn terms(&self) -> &[(u64, u64)] {
        &self.terms
    }

    /// The comparison key prod m_i^{d_i}; entropies are equal iff these are.
    pub fn product(&self) -> BigUint {
        let mut acc = BigUint::one();
        for &(base, deg) in &self.terms {
            acc *= BigUint::from(base).pow(deg as u32);
        }
        acc
    }

    /// Floating approximation in nats.
    pub fn nats(&self) -> f64 {
        self.terms
            .iter()
            .map(|&(base, deg)| deg as f64 * (base as f64).ln())
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|&(_, deg)| deg == 0)
    }

    /// k * h, exactly.
    pub fn scale(&self, k: u64) -> Self {
        EntropyValue {
            terms: self.terms.iter().map(|&(b, d)| (b, d * k)).collect(),
        }
    }

    /// h + h', exactly (term lists concatenate; equality is by product).
    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        EntropyValue { terms }
    }
}

impl PartialEq for EntropyValue {
    fn eq(&self, other: &Self) -> bool {
        self.product() == other.product()
    }
}

impl Eq for EntropyValue {}

impl Serialize for EntropyValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("EntropyValue", 2)?;
        s.serialize_field("terms", &self.terms)?;
        s.serialize_field("nats", &self.nats())?;
        s.end()
    }
}

impl LinearCA {
    /// h_alg(S) = sum over primary components of deg(S^(i)) * log p_i^{k_i}.
    pub fn algebraic_entropy(&self) -> EntropyValue {
        let decomposition = self.decompose();
        let terms = self
            .modulus()
            .prime_powers()
            .iter()
            .zip(decomposition.components())
            .map(|(&mi, comp)| (mi, comp.degree()))
            .collect();
        EntropyValue { terms }
    }

    /// h_top of the dual automaton T; equal to the algebraic entropy of S
    /// via the Bridge Theorem, exposed separately for the dual-side report.
    pub fn topological_entropy_of_dual(&self) -> EntropyValue {
        self.algebraic_entropy()
    }

    /// The n >= 0 with h_alg(S) = h_alg(sigma^n), when one exists; this
    /// happens exactly when all component degrees agree.
    pub fn shift_equivalent_exponent(&self) -> Option<u64> {
        let entropy = self.algebraic_entropy();
        let mut degrees = entropy.terms.iter().map(|&(_, d)| d);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

/// h_alg(sigma^n) = |n| log m, as terms [(m_i, |n|)].
pub fn entropy_of_shift(ctx: &Modulus, n: i64) -> EntropyValue {
    let d = n.unsigned_abs();
    EntropyValue {
        terms: ctx.prime_powers().iter().map(|&mi| (mi, d)).collect(),
    }
}
