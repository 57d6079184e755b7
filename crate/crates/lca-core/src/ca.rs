//! Linear cellular automata as data: the coefficient map `lambda`, evolution
//! of finite configurations, shifts, composition and reflection.
//!
//! Sign convention, fixed once for the whole crate: the Laurent polynomial of
//! a rule carries coefficient `lambda_i` at exponent `-i`, so the right shift
//! (coefficient 1 at index -1) is the monomial X. Every other module consumes
//! rule polynomials only through `to_poly` / `from_poly`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LcaError, Result};
use crate::laurent::LaurentPoly;
use crate::modring::{Modulus, Residue};

/// A (finitary) linear cellular automaton over Z_m, determined by its
/// finitely supported coefficient map `i -> lambda_i`.
///
/// The same data describes both the finitary automaton S acting on finite
/// configurations and its full-space counterpart T; duality statements are
/// exercised through `reflect` and `FiniteConfiguration::pairing`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearCA {
    ctx: Modulus,
    lambda: BTreeMap<i64, u64>,
}

/// A finitely supported map Z -> Z_m, i.e. an element of the direct sum.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteConfiguration {
    ctx: Modulus,
    cells: BTreeMap<i64, u64>,
}

impl LinearCA {
    /// Builds a rule from (index, coefficient) pairs; coefficients are
    /// reduced mod m and zeros pruned.
    pub fn new<I: IntoIterator<Item = (i64, i64)>>(ctx: &Modulus, coeffs: I) -> Self {
        let mut lambda: BTreeMap<i64, u64> = BTreeMap::new();
        for (i, c) in coeffs {
            let v = ctx.reduce(c);
            let entry = lambda.entry(i).or_insert(0);
            *entry = ctx.add_raw(*entry, v);
        }
        lambda.retain(|_, v| *v != 0);
        LinearCA {
            ctx: ctx.clone(),
            lambda,
        }
    }

    pub fn zero(ctx: &Modulus) -> Self {
        LinearCA {
            ctx: ctx.clone(),
            lambda: BTreeMap::new(),
        }
    }

    pub fn identity(ctx: &Modulus) -> Self {
        Self::shift(ctx, 0)
    }

    /// sigma^n: the right shift for n = 1, its inverse beta for n = -1;
    /// the rule has coefficient 1 at index -n.
    pub fn shift(ctx: &Modulus, n: i64) -> Self {
        Self::new(ctx, [(-n, 1)])
    }

    pub fn modulus(&self) -> &Modulus {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.lambda.iter().map(|(&i, &c)| (i, c))
    }

    pub fn coefficient(&self, i: i64) -> u64 {
        self.lambda.get(&i).copied().unwrap_or(0)
    }

    /// supp(lambda), ascending.
    pub fn support(&self) -> Vec<i64> {
        self.lambda.keys().copied().collect()
    }

    /// supp*(lambda): indices whose coefficient is a unit mod m.
    pub fn reduced_support(&self) -> Vec<i64> {
        self.lambda
            .iter()
            .filter(|&(_, &c)| self.ctx.is_unit_raw(c))
            .map(|(&i, _)| i)
            .collect()
    }

    /// Memory bounds (l, r) = (min supp, max supp); None for the zero rule.
    pub fn memory_bounds(&self) -> Option<(i64, i64)> {
        match (self.lambda.keys().next(), self.lambda.keys().next_back()) {
            (Some(&l), Some(&r)) => Some((l, r)),
            _ => None,
        }
    }

    /// A_S(X) = sum of lambda_i X^{-i}.
    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            &self.ctx,
            self.lambda.iter().map(|(&i, &c)| (-i, c as i64)),
        )
    }

    /// Inverse of `to_poly`: lambda_i is the coefficient of X^{-i}.
    pub fn from_poly(poly: &LaurentPoly) -> Self {
        Self::new(
            poly.modulus(),
            poly.terms().map(|(e, c)| (-e, c as i64)),
        )
    }

    fn check_ctx_config(&self, c: &FiniteConfiguration) -> Result<()> {
        if self.ctx != c.ctx {
            return Err(LcaError::ModulusMismatch {
                left: self.ctx.value(),
                right: c.ctx.value(),
            });
        }
        Ok(())
    }

    /// One evolution step: result_n = sum_i lambda_i * c_{n+i}.
    ///
    /// Direct sparse convolution, deliberately not routed through the
    /// polynomial product so the two paths can cross-check each other.
    pub fn apply(&self, c: &FiniteConfiguration) -> Result<FiniteConfiguration> {
        self.check_ctx_config(c)?;
        let mut cells: BTreeMap<i64, u64> = BTreeMap::new();
        for (&i, &li) in &self.lambda {
            for (&j, &cj) in &c.cells {
                let n = j - i;
                let prod = self.ctx.mul_raw(li, cj);
                let entry = cells.entry(n).or_insert(0);
                *entry = self.ctx.add_raw(*entry, prod);
            }
        }
        cells.retain(|_, v| *v != 0);
        Ok(FiniteConfiguration {
            ctx: self.ctx.clone(),
            cells,
        })
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        let poly = self.to_poly().mul(&other.to_poly())?;
        Ok(Self::from_poly(&poly))
    }

    /// Pointwise sum of the coefficient maps (the algebra's additive law).
    pub fn sum(&self, other: &Self) -> Result<Self> {
        let poly = self.to_poly().add(&other.to_poly())?;
        Ok(Self::from_poly(&poly))
    }

    pub fn power(&self, n: u64) -> Self {
        Self::from_poly(&self.to_poly().pow(n))
    }

    /// The reflected rule lambda^ with lambda^_i = lambda_{-i}; this is the
    /// coefficient data of the Pontryagin dual of S.
    pub fn reflect(&self) -> Self {
        let lambda = self.lambda.iter().map(|(&i, &c)| (-i, c)).collect();
        LinearCA {
            ctx: self.ctx.clone(),
            lambda,
        }
    }
}

impl fmt::Debug for LinearCA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCA(m={}, lambda={:?})", self.ctx.value(), self.lambda)
    }
}

impl FiniteConfiguration {
    pub fn new<I: IntoIterator<Item = (i64, i64)>>(ctx: &Modulus, cells: I) -> Self {
        let mut map: BTreeMap<i64, u64> = BTreeMap::new();
        for (n, v) in cells {
            let r = ctx.reduce(v);
            let entry = map.entry(n).or_insert(0);
            *entry = ctx.add_raw(*entry, r);
        }
        map.retain(|_, v| *v != 0);
        FiniteConfiguration {
            ctx: ctx.clone(),
            cells: map,
        }
    }

    pub fn zero(ctx: &Modulus) -> Self {
        FiniteConfiguration {
            ctx: ctx.clone(),
            cells: BTreeMap::new(),
        }
    }

    /// The basis configuration e_i.
    pub fn basis(ctx: &Modulus, i: i64) -> Self {
        Self::new(ctx, [(i, 1)])
    }

    pub fn modulus(&self) -> &Modulus {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, n: i64) -> u64 {
        self.cells.get(&n).copied().unwrap_or(0)
    }

    pub fn cells(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.cells.iter().map(|(&n, &v)| (n, v))
    }

    pub fn support(&self) -> Vec<i64> {
        self.cells.keys().copied().collect()
    }

    pub fn support_bounds(&self) -> Option<(i64, i64)> {
        match (self.cells.keys().next(), self.cells.keys().next_back()) {
            (Some(&l), Some(&r)) => Some((l, r)),
            _ => None,
        }
    }

    /// The reflected configuration with cell_n -> cell_{-n}; an involution.
    pub fn reflect(&self) -> Self {
        let cells = self.cells.iter().map(|(&n, &v)| (-n, v)).collect();
        FiniteConfiguration {
            ctx: self.ctx.clone(),
            cells,
        }
    }

    /// The evaluation pairing <a | x> = sum a_n x_n.
    pub fn pairing(&self, other: &Self) -> Result<Residue> {
        if self.ctx != other.ctx {
            return Err(LcaError::ModulusMismatch {
                left: self.ctx.value(),
                right: other.ctx.value(),
            });
        }
        let mut acc = 0u64;
        for (&n, &a) in &self.cells {
            if let Some(&x) = other.cells.get(&n) {
                acc = self.ctx.add_raw(acc, self.ctx.mul_raw(a, x));
            }
        }
        Ok(self.ctx.residue(acc as i64))
    }
}

impl fmt::Debug for FiniteConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteConfiguration(m={}, cells={:?})",
            self.ctx.value(),
            self.cells
        )
    }
}

#[derive(Serialize, Deserialize)]
struct RuleJson {
    m: u64,
    lambda: BTreeMap<String, i64>,
}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    m: u64,
    cells: BTreeMap<String, i64>,
}

fn parse_keyed_map(
    ctx: &Modulus,
    raw: &BTreeMap<String, i64>,
    reduce: bool,
    what: &str,
) -> Result<Vec<(i64, i64)>> {
    let mut out = Vec::with_capacity(raw.len());
    for (key, &val) in raw {
        let idx: i64 = key
            .parse()
            .map_err(|_| LcaError::Parse(format!("bad {what} index {key:?}")))?;
        if !reduce && (val < 0 || val as u64 >= ctx.value()) {
            return Err(LcaError::Invalid(format!(
                "{what} value {val} at index {idx} is outside [0, {}); pass --reduce to reduce mod m",
                ctx.value()
            )));
        }
        out.push((idx, val));
    }
    Ok(out)
}

impl LinearCA {
    /// Loads `{"m": 6, "lambda": {"-1": 4, "0": 3}}`. Without `reduce`,
    /// coefficients outside [0, m) are rejected rather than silently folded.
    pub fn from_json_str(s: &str, reduce: bool) -> Result<Self> {
        let raw: RuleJson =
            serde_json::from_str(s).map_err(|e| LcaError::Parse(e.to_string()))?;
        let ctx = Modulus::new(raw.m)?;
        let coeffs = parse_keyed_map(&ctx, &raw.lambda, reduce, "coefficient")?;
        Ok(Self::new(&ctx, coeffs))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let lambda: BTreeMap<String, u64> = self
            .lambda
            .iter()
            .map(|(&i, &c)| (i.to_string(), c))
            .collect();
        serde_json::json!({ "m": self.ctx.value(), "lambda": lambda })
    }

    pub fn to_json_string(&self) -> String {
        self.to_json_value().to_string()
    }
}

impl FiniteConfiguration {
    /// Loads `{"m": 6, "cells": {"0": 1}}`; same shape and strictness rules
    /// as the rule format.
    pub fn from_json_str(s: &str, reduce: bool) -> Result<Self> {
        let raw: ConfigJson =
            serde_json::from_str(s).map_err(|e| LcaError::Parse(e.to_string()))?;
        let ctx = Modulus::new(raw.m)?;
        let cells = parse_keyed_map(&ctx, &raw.cells, reduce, "cell")?;
        Ok(Self::new(&ctx, cells))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let cells: BTreeMap<String, u64> = self
            .cells
            .iter()
            .map(|(&n, &v)| (n.to_string(), v))
            .collect();
        serde_json::json!({ "m": self.ctx.value(), "cells": cells })
    }

    pub fn to_json_string(&self) -> String {
        self.to_json_value().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    #[test]
    fn to_poly_sign_convention() {
        let m6 = m(6);
        let s = LinearCA::new(&m6, [(0, 3), (1, 2)]);
        assert_eq!(
            s.to_poly(),
            LaurentPoly::from_terms(&m6, [(0, 3), (-1, 2)])
        );
        let sigma = LinearCA::shift(&m6, 1);
        assert_eq!(sigma.to_poly(), LaurentPoly::monomial(&m6, 1, 1));
        assert!(LinearCA::zero(&m6).to_poly().is_zero());
    }

    #[test]
    fn poly_roundtrip() {
        let m6 = m(6);
        for rule in [
            LinearCA::new(&m6, [(0, 3), (1, 2)]),
            LinearCA::shift(&m6, 1),
            LinearCA::zero(&m6),
            LinearCA::new(&m6, [(-2, 5), (0, 1), (3, 4)]),
        ] {
            assert_eq!(LinearCA::from_poly(&rule.to_poly()), rule);
        }
    }

    #[test]
    fn apply_examples() {
        let m3 = m(3);
        let s = LinearCA::new(&m3, [(-1, 1), (0, 1), (1, 1)]);
        let image = s.apply(&FiniteConfiguration::basis(&m3, 0)).unwrap();
        assert_eq!(
            image,
            FiniteConfiguration::new(&m3, [(-1, 1), (0, 1), (1, 1)])
        );

        let sigma = LinearCA::shift(&m3, 1);
        assert_eq!(
            sigma.apply(&FiniteConfiguration::basis(&m3, 0)).unwrap(),
            FiniteConfiguration::basis(&m3, 1)
        );

        assert!(s.apply(&FiniteConfiguration::zero(&m3)).unwrap().is_zero());
    }

    #[test]
    fn apply_matches_polynomial_route() {
        // independent check of the convolution against P_{S(c)} = A_S * P_c
        let m12 = m(12);
        let s = LinearCA::new(&m12, [(-2, 7), (0, 3), (1, 10)]);
        let c = FiniteConfiguration::new(&m12, [(-1, 5), (2, 11), (4, 1)]);
        let direct = s.apply(&c).unwrap();
        let pc = LaurentPoly::from_terms(&m12, c.cells().map(|(n, v)| (n, v as i64)));
        let product = s.to_poly().mul(&pc).unwrap();
        let via_poly =
            FiniteConfiguration::new(&m12, product.terms().map(|(e, v)| (e, v as i64)));
        assert_eq!(direct, via_poly);
    }

    #[test]
    fn compose_examples() {
        let m6 = m(6);
        let sigma = LinearCA::shift(&m6, 1);
        let beta = LinearCA::shift(&m6, -1);
        assert_eq!(sigma.compose(&beta).unwrap(), LinearCA::identity(&m6));

        let s = LinearCA::new(&m6, [(0, 3), (1, 2)]);
        assert_eq!(s.compose(&LinearCA::identity(&m6)).unwrap(), s);

        let left = LinearCA::from_poly(&LaurentPoly::from_terms(&m6, [(0, 3), (-1, 2)]));
        let right = LinearCA::from_poly(&LaurentPoly::from_terms(&m6, [(0, 3), (1, 2)]));
        assert_eq!(left.compose(&right).unwrap(), LinearCA::identity(&m6));
    }

    #[test]
    fn power_examples() {
        let m5 = m(5);
        let sigma = LinearCA::shift(&m5, 1);
        let mut by_compose = LinearCA::identity(&m5);
        for n in 0..=4u64 {
            assert_eq!(sigma.power(n), by_compose);
            assert_eq!(sigma.power(n), LinearCA::shift(&m5, n as i64));
            by_compose = by_compose.compose(&sigma).unwrap();
        }
        let m4 = m(4);
        let doubling = LinearCA::new(&m4, [(0, 2)]);
        assert!(doubling.power(2).is_zero());
        assert_eq!(doubling.power(0), LinearCA::identity(&m4));
    }

    #[test]
    fn reflect_examples() {
        let m3 = m(3);
        let sigma = LinearCA::shift(&m3, 1);
        assert_eq!(sigma.reflect(), LinearCA::shift(&m3, -1));
        let symmetric = LinearCA::new(&m3, [(-1, 1), (0, 1), (1, 1)]);
        assert_eq!(symmetric.reflect(), symmetric);
        let id = LinearCA::identity(&m3);
        assert_eq!(id.reflect(), id);
    }

    #[test]
    fn reflect_config_examples() {
        let m3 = m(3);
        let e1 = FiniteConfiguration::basis(&m3, 1);
        assert_eq!(e1.reflect(), FiniteConfiguration::basis(&m3, -1));
        assert!(FiniteConfiguration::zero(&m3).reflect().is_zero());
        let c = FiniteConfiguration::new(&m3, [(-2, 1), (3, 2)]);
        assert_eq!(c.reflect(), FiniteConfiguration::new(&m3, [(2, 1), (-3, 2)]));
        assert_eq!(c.reflect().reflect(), c);
    }

    #[test]
    fn pairing_examples() {
        let m3 = m(3);
        let e0 = FiniteConfiguration::basis(&m3, 0);
        let e1 = FiniteConfiguration::basis(&m3, 1);
        assert_eq!(e0.pairing(&e0).unwrap().value(), 1);
        assert_eq!(e0.pairing(&e1).unwrap().value(), 0);
        let a = FiniteConfiguration::new(&m3, [(0, 1), (1, 2)]);
        assert_eq!(a.pairing(&e1).unwrap().value(), 2);
    }

    #[test]
    fn support_bound_for_powers() {
        let m4 = m(4);
        let s = LinearCA::new(&m4, [(-1, 3), (0, 1), (2, 2)]);
        let (l, r) = s.memory_bounds().unwrap();
        for k in [-3i64, 0, 2] {
            for n in 0..=4u64 {
                let img = s.power(n).apply(&FiniteConfiguration::basis(&m4, k)).unwrap();
                if let Some((lo, hi)) = img.support_bounds() {
                    assert!(lo >= k - n as i64 * r);
                    assert!(hi <= k - n as i64 * l);
                }
            }
        }
    }

    #[test]
    fn json_roundtrip_and_strictness() {
        let s = LinearCA::from_json_str(r#"{"m": 6, "lambda": {"-1": 4, "0": 3}}"#, false)
            .unwrap();
        assert_eq!(s.coefficient(-1), 4);
        assert_eq!(s.coefficient(0), 3);
        let back = LinearCA::from_json_str(&s.to_json_string(), false).unwrap();
        assert_eq!(back, s);

        assert!(LinearCA::from_json_str(r#"{"m": 6, "lambda": {"0": 9}}"#, false).is_err());
        let reduced =
            LinearCA::from_json_str(r#"{"m": 6, "lambda": {"0": 9}}"#, true).unwrap();
        assert_eq!(reduced.coefficient(0), 3);
        assert!(LinearCA::from_json_str(r#"{"m": 1, "lambda": {}}"#, false).is_err());
        assert!(LinearCA::from_json_str(r#"{"m": 6, "lambda": {"x": 1}}"#, false).is_err());

        let c = FiniteConfiguration::from_json_str(r#"{"m": 3, "cells": {"5": 2}}"#, false)
            .unwrap();
        assert_eq!(c.cell(5), 2);
        let back = FiniteConfiguration::from_json_str(&c.to_json_string(), false).unwrap();
        assert_eq!(back, c);
    }
}
