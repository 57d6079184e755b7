//! Arithmetic in Z_m: prime factorization of the modulus, canonical residues,
//! and the CRT idempotents used to split and recombine prime-power components.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{LcaError, Result};

#[derive(Debug)]
struct ModulusInner {
    m: u64,
    /// (p_i, k_i) with p_i strictly increasing, product of p_i^{k_i} = m.
    factors: Vec<(u64, u32)>,
    /// m_i = p_i^{k_i}.
    prime_powers: Vec<u64>,
    /// e_i with e_i = 1 mod m_i and e_i = 0 mod m_j for j != i.
    idempotents: Vec<u64>,
}

/// The ambient ring Z_m together with its primary decomposition data.
///
/// Cheap to clone (shared internals) and immutable after construction.
#[derive(Clone)]
pub struct Modulus {
    inner: Arc<ModulusInner>,
}

impl PartialEq for Modulus {
    fn eq(&self, other: &Self) -> bool {
        self.inner.m == other.inner.m
    }
}

impl Eq for Modulus {}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus({})", self.inner.m)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inner.m)
    }
}

fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut k = 0u32;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            factors.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b).
fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl Modulus {
    /// Factorizes m by trial division and precomputes the CRT idempotents.
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 || m > i64::MAX as u64 {
            return Err(LcaError::InvalidModulus(m));
        }
        let factors = trial_division(m);
        let prime_powers: Vec<u64> = factors.iter().map(|&(p, k)| p.pow(k)).collect();
        let mut idempotents = Vec::with_capacity(factors.len());
        for &mi in &prime_powers {
            let cofactor = m / mi;
            // inverse of the cofactor mod m_i; exists since the factors are coprime
            let (g, x, _) = egcd(cofactor as i128, mi as i128);
            debug_assert_eq!(g, 1);
            let inv = x.rem_euclid(mi as i128) as u128;
            let e = (cofactor as u128 * inv) % m as u128;
            idempotents.push(e as u64);
        }
        Ok(Modulus {
            inner: Arc::new(ModulusInner {
                m,
                factors,
                prime_powers,
                idempotents,
            }),
        })
    }

    fn from_prime_power(p: u64, k: u32) -> Self {
        let m = p.pow(k);
        Modulus {
            inner: Arc::new(ModulusInner {
                m,
                factors: vec![(p, k)],
                prime_powers: vec![m],
                idempotents: vec![1 % m],
            }),
        }
    }

    pub fn value(&self) -> u64 {
        self.inner.m
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.inner.factors
    }

    pub fn prime_powers(&self) -> &[u64] {
        &self.inner.prime_powers
    }

    pub fn idempotents(&self) -> &[u64] {
        &self.inner.idempotents
    }

    pub fn num_components(&self) -> usize {
        self.inner.factors.len()
    }

    pub fn is_prime_power(&self) -> bool {
        self.inner.factors.len() == 1
    }

    /// The ambient ring Z_{m_i} of the i-th primary component.
    pub fn component(&self, i: usize) -> Result<Modulus> {
        let (p, k) = *self
            .inner
            .factors
            .get(i)
            .ok_or(LcaError::ComponentIndex {
                index: i,
                count: self.num_components(),
            })?;
        Ok(Modulus::from_prime_power(p, k))
    }

    /// Canonical representative of v in [0, m).
    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.inner.m as i64) as u64
    }

    pub fn residue(&self, v: i64) -> Residue {
        Residue {
            value: self.reduce(v),
            ctx: self.clone(),
        }
    }

    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.inner.m as u128) as u64
    }

    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.inner.m - (b - a)
        }
    }

    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.inner.m as u128) as u64
    }

    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.inner.m - a
        }
    }

    pub(crate) fn project_raw(&self, a: u64, i: usize) -> Result<u64> {
        let mi = *self
            .inner
            .prime_powers
            .get(i)
            .ok_or(LcaError::ComponentIndex {
                index: i,
                count: self.num_components(),
            })?;
        Ok(a % mi)
    }

    /// Recombines one residue per component into the unique a in Z_m that
    /// projects back onto each part: a = sum e_i * lift(part_i) mod m.
    pub(crate) fn crt_combine_raw(&self, parts: &[u64]) -> Result<u64> {
        if parts.len() != self.num_components() {
            return Err(LcaError::ArityMismatch {
                expected: self.num_components(),
                got: parts.len(),
            });
        }
        let m = self.inner.m as u128;
        let mut acc = 0u128;
        for (&e, &part) in self.inner.idempotents.iter().zip(parts) {
            acc = (acc + e as u128 * part as u128) % m;
        }
        Ok(acc as u64)
    }

    pub(crate) fn invert_raw(&self, a: u64) -> Result<u64> {
        let (g, x, _) = egcd(a as i128, self.inner.m as i128);
        if g != 1 {
            return Err(LcaError::NotAUnit {
                value: a,
                modulus: self.inner.m,
                gcd: g as u64,
            });
        }
        Ok(x.rem_euclid(self.inner.m as i128) as u64)
    }

    /// gcd(a, m); independent of the representative chosen for a.
    pub(crate) fn gcd_raw(&self, a: u64) -> u64 {
        num_integer::gcd(a, self.inner.m)
    }

    pub(crate) fn is_unit_raw(&self, a: u64) -> bool {
        self.gcd_raw(a) == 1
    }
}

/// A canonical element of Z_m. The stored value is always in [0, m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    value: u64,
    ctx: Modulus,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> &Modulus {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// gcd of the representative with m.
    pub fn gcd_with_m(&self) -> u64 {
        self.ctx.gcd_raw(self.value)
    }

    pub fn is_unit(&self) -> bool {
        self.gcd_with_m() == 1
    }

    /// Remainder modulo the i-th prime-power factor, as an element of Z_{m_i}.
    pub fn project(&self, i: usize) -> Result<Residue> {
        let v = self.ctx.project_raw(self.value, i)?;
        Ok(Residue {
            value: v,
            ctx: self.ctx.component(i)?,
        })
    }

    /// Multiplicative inverse; errors with the gcd witness when none exists.
    pub fn invert(&self) -> Result<Residue> {
        Ok(Residue {
            value: self.ctx.invert_raw(self.value)?,
            ctx: self.ctx.clone(),
        })
    }
}

/// Inverse of `Residue::project` across all components.
pub fn crt_combine(ctx: &Modulus, parts: &[Residue]) -> Result<Residue> {
    if parts.len() != ctx.num_components() {
        return Err(LcaError::ArityMismatch {
            expected: ctx.num_components(),
            got: parts.len(),
        });
    }
    for (i, part) in parts.iter().enumerate() {
        let mi = ctx.prime_powers()[i];
        if part.modulus().value() != mi {
            return Err(LcaError::ModulusMismatch {
                left: mi,
                right: part.modulus().value(),
            });
        }
    }
    let raw: Vec<u64> = parts.iter().map(|r| r.value).collect();
    Ok(ctx.residue(ctx.crt_combine_raw(&raw)? as i64))
}

fn check_same_ctx(a: &Residue, b: &Residue) {
    assert_eq!(
        a.ctx.value(),
        b.ctx.value(),
        "residue arithmetic across different moduli"
    );
}

impl Add for &Residue {
    type Output = Residue;
    fn add(self, rhs: &Residue) -> Residue {
        check_same_ctx(self, rhs);
        Residue {
            value: self.ctx.add_raw(self.value, rhs.value),
            ctx: self.ctx.clone(),
        }
    }
}

impl Sub for &Residue {
    type Output = Residue;
    fn sub(self, rhs: &Residue) -> Residue {
        check_same_ctx(self, rhs);
        Residue {
            value: self.ctx.sub_raw(self.value, rhs.value),
            ctx: self.ctx.clone(),
        }
    }
}

impl Mul for &Residue {
    type Output = Residue;
    fn mul(self, rhs: &Residue) -> Residue {
        check_same_ctx(self, rhs);
        Residue {
            value: self.ctx.mul_raw(self.value, rhs.value),
            ctx: self.ctx.clone(),
        }
    }
}

impl Neg for &Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: self.ctx.neg_raw(self.value),
            ctx: self.ctx.clone(),
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
