//! Laurent polynomials over Z_m: the ring R_m = Z_m[X, X^-1].
//!
//! Coefficients are stored sparsely, keyed by exponent; a zero coefficient is
//! never stored, so the support of a polynomial is exactly its key set and
//! structural equality is semantic equality.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{LcaError, Result};
use crate::modring::{Modulus, Residue};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    ctx: Modulus,
    coeffs: BTreeMap<i64, u64>,
}

impl LaurentPoly {
    pub fn zero(ctx: &Modulus) -> Self {
        LaurentPoly {
            ctx: ctx.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Modulus) -> Self {
        Self::monomial(ctx, 1, 0)
    }

    /// c * X^e (reduced mod m; the zero polynomial if c reduces to 0).
    pub fn monomial(ctx: &Modulus, c: i64, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        let v = ctx.reduce(c);
        if v != 0 {
            coeffs.insert(e, v);
        }
        LaurentPoly {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    /// Builds from (exponent, coefficient) pairs, accumulating repeats mod m.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(ctx: &Modulus, terms: I) -> Self {
        let mut coeffs: BTreeMap<i64, u64> = BTreeMap::new();
        for (e, c) in terms {
            let v = ctx.reduce(c);
            let entry = coeffs.entry(e).or_insert(0);
            *entry = ctx.add_raw(*entry, v);
        }
        coeffs.retain(|_, v| *v != 0);
        LaurentPoly {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Raw coefficient at exponent e (0 when absent).
    pub fn coeff(&self, e: i64) -> u64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn coeff_residue(&self, e: i64) -> Residue {
        self.ctx.residue(self.coeff(e) as i64)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    /// supp(A): exponents with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<i64> {
        self.coeffs.keys().copied().collect()
    }

    /// supp*(A): exponents whose coefficient is a unit mod m, ascending.
    pub fn reduced_support(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .filter(|&(_, &c)| self.ctx.is_unit_raw(c))
            .map(|(&e, _)| e)
            .collect()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(LcaError::ModulusMismatch {
                left: self.ctx.value(),
                right: other.ctx.value(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut coeffs = self.coeffs.clone();
        for (&e, &c) in &other.coeffs {
            let entry = coeffs.entry(e).or_insert(0);
            *entry = self.ctx.add_raw(*entry, c);
        }
        coeffs.retain(|_, v| *v != 0);
        Ok(LaurentPoly {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&e, &c)| (e, self.ctx.neg_raw(c)))
            .collect();
        LaurentPoly {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }

    /// Convolution product in R_m.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut coeffs: BTreeMap<i64, u64> = BTreeMap::new();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &other.coeffs {
                let e = e1 + e2;
                let prod = self.ctx.mul_raw(c1, c2);
                let entry = coeffs.entry(e).or_insert(0);
                *entry = self.ctx.add_raw(*entry, prod);
            }
        }
        coeffs.retain(|_, v| *v != 0);
        Ok(LaurentPoly {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    /// A^n by repeated squaring; A^0 = 1.
    pub fn pow(&self, n: u64) -> Self {
        let mut result = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base).expect("same context");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same context");
            }
        }
        result
    }

    /// A*: keeps exactly the coefficients coprime to m.
    pub fn reduced(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|&(_, &c)| self.ctx.is_unit_raw(c))
            .map(|(&e, &c)| (e, c))
            .collect();
        LaurentPoly {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }

    /// deg*(A) = deg(A_+) + deg(A_-): with R = supp*(A) this is
    /// max(0, max R) - min(0, min R), and 0 when R is empty.
    pub fn reduced_degree(&self) -> u64 {
        let r = self.reduced_support();
        match (r.first(), r.last()) {
            (Some(&lo), Some(&hi)) => (hi.max(0) - lo.min(0)) as u64,
            _ => 0,
        }
    }

    /// Coefficientwise projection onto R_{m_i}.
    pub fn project(&self, i: usize) -> Result<LaurentPoly> {
        let comp = self.ctx.component(i)?;
        let mut coeffs = BTreeMap::new();
        for (&e, &c) in &self.coeffs {
            let v = self.ctx.project_raw(c, i)?;
            if v != 0 {
                coeffs.insert(e, v);
            }
        }
        Ok(LaurentPoly { ctx: comp, coeffs })
    }

    /// Inverse of `project` across all components, coefficientwise CRT.
    pub fn crt_combine(ctx: &Modulus, parts: &[LaurentPoly]) -> Result<LaurentPoly> {
        if parts.len() != ctx.num_components() {
            return Err(LcaError::ArityMismatch {
                expected: ctx.num_components(),
                got: parts.len(),
            });
        }
        for (i, part) in parts.iter().enumerate() {
            if part.ctx.value() != ctx.prime_powers()[i] {
                return Err(LcaError::ModulusMismatch {
                    left: ctx.prime_powers()[i],
                    right: part.ctx.value(),
                });
            }
        }
        let mut exps: Vec<i64> = parts
            .iter()
            .flat_map(|p| p.coeffs.keys().copied())
            .collect();
        exps.sort_unstable();
        exps.dedup();
        let mut coeffs = BTreeMap::new();
        for e in exps {
            let vals: Vec<u64> = parts.iter().map(|p| p.coeff(e)).collect();
            let v = ctx.crt_combine_raw(&vals)?;
            if v != 0 {
                coeffs.insert(e, v);
            }
        }
        Ok(LaurentPoly {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    /// Parses the grammar produced by `Display`: terms like `4*X^-2`, `X`, `3`,
    /// joined by `+` or `-`.
    pub fn parse(ctx: &Modulus, input: &str) -> Result<LaurentPoly> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(LcaError::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(i64, i64)> = Vec::new();
        let mut rest = s.as_str();
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        while !rest.is_empty() {
            let end = rest
                .char_indices()
                .skip(1)
                .find(|&(_, c)| c == '+' || c == '-')
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            let (coeff, exp) = parse_term(term)?;
            terms.push((exp, sign * coeff));
            rest = tail;
            if let Some(r) = rest.strip_prefix('+') {
                sign = 1;
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r;
            }
        }
        Ok(Self::from_terms(ctx, terms))
    }
}

fn parse_term(term: &str) -> Result<(i64, i64)> {
    let bad = || LcaError::Parse(format!("malformed term {term:?}"));
    if let Some(x_pos) = term.find('X') {
        let coeff_part = &term[..x_pos];
        let coeff = if coeff_part.is_empty() {
            1
        } else {
            let c = coeff_part.strip_suffix('*').unwrap_or(coeff_part);
            c.parse::<i64>().map_err(|_| bad())?
        };
        let exp_part = &term[x_pos + 1..];
        let exp = if exp_part.is_empty() {
            1
        } else {
            exp_part
                .strip_prefix('^')
                .ok_or_else(bad)?
                .parse::<i64>()
                .map_err(|_| bad())?
        };
        Ok((coeff, exp))
    } else {
        Ok((term.parse::<i64>().map_err(|_| bad())?, 0))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (c, e) {
                (_, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, _) => write!(f, "X^{e}")?,
                (_, 1) => write!(f, "{c}*X")?,
                (_, _) => write!(f, "{c}*X^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({} over Z_{})", self, self.ctx.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn add_examples() {
        let m6 = m(6);
        let a = LaurentPoly::from_terms(&m6, [(0, 3), (1, 4)]);
        let b = LaurentPoly::from_terms(&m6, [(0, 3), (1, 2)]);
        assert!(a.add(&b).unwrap().is_zero());
        assert_eq!(a.add(&LaurentPoly::zero(&m6)).unwrap(), a);
        let one = LaurentPoly::monomial(&m6, 1, 0);
        let five = LaurentPoly::monomial(&m6, 5, 0);
        assert!(one.add(&five).unwrap().is_zero());
    }

    #[test]
    fn add_modulus_mismatch() {
        let a = LaurentPoly::one(&m(6));
        let b = LaurentPoly::one(&m(4));
        assert!(matches!(
            a.add(&b),
            Err(LcaError::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn mul_examples() {
        let m2 = m(2);
        let a = LaurentPoly::from_terms(&m2, [(0, 1), (1, 1)]);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq, LaurentPoly::from_terms(&m2, [(0, 1), (2, 1)]));

        let m6 = m(6);
        let left = LaurentPoly::from_terms(&m6, [(0, 3), (-1, 2)]);
        let right = LaurentPoly::from_terms(&m6, [(0, 3), (1, 2)]);
        assert_eq!(left.mul(&right).unwrap(), LaurentPoly::one(&m6));

        let any = LaurentPoly::from_terms(&m6, [(-2, 5), (3, 1)]);
        assert_eq!(any.mul(&LaurentPoly::one(&m6)).unwrap(), any);
    }

    #[test]
    fn pow_examples() {
        let m2 = m(2);
        let a = LaurentPoly::from_terms(&m2, [(0, 1), (1, 1)]);
        assert_eq!(a.pow(2), LaurentPoly::from_terms(&m2, [(0, 1), (2, 1)]));
        assert_eq!(a.pow(0), LaurentPoly::one(&m2));

        let m4 = m(4);
        let b = LaurentPoly::from_terms(&m4, [(0, 1), (1, 2)]);
        assert_eq!(b.pow(2), LaurentPoly::one(&m4));
    }

    #[test]
    fn reduced_examples() {
        let m6 = m(6);
        let a = LaurentPoly::from_terms(&m6, [(0, 3), (1, 4)]);
        assert!(a.reduced().is_zero());
        let b = LaurentPoly::from_terms(&m6, [(-1, 3), (1, 4)]);
        assert!(b.reduced().is_zero());
        let m4 = m(4);
        let c = LaurentPoly::from_terms(&m4, [(0, 1), (1, 2)]);
        assert_eq!(c.reduced(), LaurentPoly::one(&m4));
    }

    #[test]
    fn reduced_degree_examples() {
        let m3 = m(3);
        let a = LaurentPoly::from_terms(&m3, [(-1, 1), (0, 1), (1, 1)]);
        assert_eq!(a.reduced_degree(), 2);
        assert_eq!(LaurentPoly::zero(&m3).reduced_degree(), 0);
        let m6 = m(6);
        let b = LaurentPoly::from_terms(&m6, [(-1, 3), (1, 4)]);
        assert_eq!(b.reduced_degree(), 0);
    }

    #[test]
    fn reduced_degree_matches_case_split() {
        // the three-branch definition against the single formula, exhaustively
        // over small supports
        for lo in -4i64..=4 {
            for hi in lo..=4 {
                let formula = (hi.max(0) - lo.min(0)) as u64;
                let case = if hi <= 0 {
                    (-lo) as u64
                } else if lo >= 0 {
                    hi as u64
                } else {
                    (hi - lo) as u64
                };
                assert_eq!(formula, case, "lo={lo} hi={hi}");
            }
        }
    }

    #[test]
    fn project_examples() {
        let m6 = m(6);
        let a = LaurentPoly::from_terms(&m6, [(0, 3), (1, 4)]);
        let p2 = a.project(0).unwrap();
        assert_eq!(p2, LaurentPoly::one(&m(2)));
        let p3 = a.project(1).unwrap();
        assert_eq!(p3, LaurentPoly::monomial(&m(3), 1, 1));
        assert!(LaurentPoly::zero(&m6).project(0).unwrap().is_zero());
    }

    #[test]
    fn crt_combine_examples() {
        let m6 = m(6);
        let one2 = LaurentPoly::one(&m(2));
        let x3 = LaurentPoly::monomial(&m(3), 1, 1);
        let combined = LaurentPoly::crt_combine(&m6, &[one2.clone(), x3]).unwrap();
        assert_eq!(combined, LaurentPoly::from_terms(&m6, [(0, 3), (1, 4)]));

        let m4 = m(4);
        let p = LaurentPoly::from_terms(&m4, [(2, 3)]);
        assert_eq!(LaurentPoly::crt_combine(&m4, &[p.clone()]).unwrap(), p);

        let two_x3 = LaurentPoly::monomial(&m(3), 2, 1);
        let combined2 = LaurentPoly::crt_combine(&m6, &[one2.clone(), two_x3.clone()]).unwrap();
        assert_eq!(combined2, LaurentPoly::from_terms(&m6, [(0, 3), (1, 2)]));
        assert_eq!(combined2.project(0).unwrap(), one2);
        assert_eq!(combined2.project(1).unwrap(), two_x3);
    }

    #[test]
    fn display_and_parse() {
        let m6 = m(6);
        let a = LaurentPoly::from_terms(&m6, [(2, 4), (0, 3), (-1, 1)]);
        assert_eq!(a.to_string(), "4*X^2 + 3 + X^-1");
        assert_eq!(LaurentPoly::parse(&m6, &a.to_string()).unwrap(), a);
        assert_eq!(LaurentPoly::zero(&m6).to_string(), "0");
        assert_eq!(
            LaurentPoly::parse(&m6, "0").unwrap(),
            LaurentPoly::zero(&m6)
        );
        assert_eq!(
            LaurentPoly::parse(&m6, "X - 2*X^-3 + 11").unwrap(),
            LaurentPoly::from_terms(&m6, [(1, 1), (-3, -2), (0, 11)])
        );
        assert!(LaurentPoly::parse(&m6, "X^").is_err());
        assert!(LaurentPoly::parse(&m6, "foo").is_err());
    }
}
