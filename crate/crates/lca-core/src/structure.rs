//! Primary factorization of a rule, injectivity/surjectivity/invertibility
//! classification, and explicit inverse construction.
//!
//! Everything here runs through the prime-power components of the modulus:
//! a rule is surjective exactly when every component has a single unit
//! coefficient, and injective exactly when every component has at least one.

use serde::Serialize;

use crate::ca::LinearCA;
use crate::error::{LcaError, Result};
use crate::laurent::LaurentPoly;
use crate::modring::Modulus;

/// The primary components of a rule: the i-th entry is the coefficientwise
/// projection of lambda onto Z_{p_i^{k_i}}.
#[derive(Clone, Debug)]
pub struct PrimaryDecomposition {
    ctx: Modulus,
    components: Vec<LinearCA>,
}

impl PrimaryDecomposition {
    pub fn modulus(&self) -> &Modulus {
        &self.ctx
    }

    pub fn components(&self) -> &[LinearCA] {
        &self.components
    }

    pub fn component(&self, i: usize) -> Result<&LinearCA> {
        self.components.get(i).ok_or(LcaError::ComponentIndex {
            index: i,
            count: self.components.len(),
        })
    }

    /// Reassembles the original rule by coefficientwise CRT.
    pub fn recombine(&self) -> Result<LinearCA> {
        let parts: Vec<LaurentPoly> = self.components.iter().map(|c| c.to_poly()).collect();
        let poly = LaurentPoly::crt_combine(&self.ctx, &parts)?;
        Ok(LinearCA::from_poly(&poly))
    }
}

/// Injectivity/surjectivity flags for S and for its dual T, plus the degree
/// data the entropy formula consumes.
///
/// The dual flags are forced by duality: T is injective iff S is surjective
/// and T is surjective iff S is injective. Surjectivity of S is equivalent to
/// invertibility with a linear-CA inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub s_injective: bool,
    pub s_surjective: bool,
    pub t_injective: bool,
    pub t_surjective: bool,
    pub invertible_with_ca_inverse: bool,
    pub degree: u64,
    pub component_degrees: Vec<u64>,
}

impl Classification {
    /// Pre-injectivity of the full-space automaton. For linear rules on Z it
    /// coincides with triviality of the finite-support kernel, i.e. with
    /// injectivity of S, which makes the Garden of Eden statement (surjective
    /// iff pre-injective) directly testable here.
    pub fn pre_injective(&self) -> bool {
        self.s_injective
    }
}

/// Permutivity of the extreme memory coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Permutivity {
    pub leftmost: bool,
    pub rightmost: bool,
    pub bipermutive: bool,
}

/// Witness for the prime-power shift-power identity
/// S^{p^{k-1}(p-1)} = sigma^{n * p^{k-1}(p-1)}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftPowerIdentity {
    pub exponent: u64,
    pub shift_power: i64,
}

impl LinearCA {
    /// Splits the rule into its primary components.
    pub fn decompose(&self) -> PrimaryDecomposition {
        let ctx = self.modulus().clone();
        let components = (0..ctx.num_components())
            .map(|i| {
                let poly = self.to_poly().project(i).expect("component in range");
                LinearCA::from_poly(&poly)
            })
            .collect();
        PrimaryDecomposition { ctx, components }
    }

    /// deg(S): the reduced degree of the rule polynomial.
    pub fn degree(&self) -> u64 {
        self.to_poly().reduced_degree()
    }

    pub fn classify(&self) -> Classification {
        let decomposition = self.decompose();
        let mut s_injective = true;
        let mut s_surjective = true;
        let mut component_degrees = Vec::with_capacity(decomposition.components.len());
        for comp in &decomposition.components {
            let units = comp.reduced_support().len();
            s_injective &= units >= 1;
            s_surjective &= units == 1;
            component_degrees.push(comp.degree());
        }
        Classification {
            s_injective,
            s_surjective,
            t_injective: s_surjective,
            t_surjective: s_injective,
            invertible_with_ca_inverse: s_surjective,
            degree: self.degree(),
            component_degrees,
        }
    }

    /// Constructs the inverse rule when S is surjective (equivalently,
    /// bijective with linear-CA inverse).
    ///
    /// Per prime-power component write A = s*X^n + D where s*X^n is the unique
    /// unit monomial and every coefficient of D is divisible by p. Then with
    /// C = s^{-1} X^{-n} D the finite Neumann series
    /// A^{-1} = s^{-1} X^{-n} (1 - C + C^2 - ... +- C^{k-1})
    /// terminates because C^k = 0 mod p^k. Components recombine by CRT.
    pub fn invert(&self) -> Result<LinearCA> {
        let ctx = self.modulus();
        let decomposition = self.decompose();
        let mut parts = Vec::with_capacity(decomposition.components.len());
        for (index, comp) in decomposition.components.iter().enumerate() {
            let a = comp.to_poly();
            let units = a.reduced_support();
            if units.len() != 1 {
                return Err(LcaError::NotInvertible {
                    component: index,
                    supp_star_len: units.len(),
                });
            }
            let comp_ctx = a.modulus().clone();
            let k = comp_ctx.factors()[0].1 as u64;
            let n = units[0];
            let s = a.coeff(n);
            let s_inv = comp_ctx.residue(s as i64).invert()?.value();
            let lead_inv = LaurentPoly::monomial(&comp_ctx, s_inv as i64, -n);
            let tail = a.sub(&LaurentPoly::monomial(&comp_ctx, s as i64, n))?;
            let c = lead_inv.mul(&tail)?;
            let neg_c = c.neg();
            let mut series = LaurentPoly::one(&comp_ctx);
            let mut term = LaurentPoly::one(&comp_ctx);
            for _ in 1..k {
                term = term.mul(&neg_c)?;
                series = series.add(&term)?;
            }
            parts.push(lead_inv.mul(&series)?);
        }
        let inverse_poly = LaurentPoly::crt_combine(ctx, &parts)?;
        debug_assert_eq!(
            inverse_poly.mul(&self.to_poly()).unwrap(),
            LaurentPoly::one(ctx)
        );
        Ok(LinearCA::from_poly(&inverse_poly))
    }

    /// For a bijective rule over a prime power, returns e = p^{k-1}(p-1) and
    /// the signed n with S^e = sigma^{n*e}, checked by exact rule equality.
    pub fn shift_power_identity(&self) -> Result<ShiftPowerIdentity> {
        let ctx = self.modulus();
        if !ctx.is_prime_power() {
            return Err(LcaError::CompositeModulus(ctx.value()));
        }
        let units = self.reduced_support();
        if units.len() != 1 {
            return Err(LcaError::NotInvertible {
                component: 0,
                supp_star_len: units.len(),
            });
        }
        let (p, k) = ctx.factors()[0];
        let exponent = p
            .checked_pow(k - 1)
            .and_then(|q| q.checked_mul(p - 1))
            .ok_or_else(|| LcaError::Budget {
                what: format!("shift-power exponent for modulus {}", ctx.value()),
                limit: u64::MAX,
            })?;
        let n = -units[0];
        let shift_exp = (n as i128) * (exponent as i128);
        let shift_exp = i64::try_from(shift_exp).map_err(|_| LcaError::Budget {
            what: "shift exponent".into(),
            limit: i64::MAX as u64,
        })?;
        let lhs = self.power(exponent);
        let rhs = LinearCA::shift(ctx, shift_exp);
        if lhs != rhs {
            // cannot happen for a rule that passed the unit-coefficient check
            return Err(LcaError::Invalid(format!(
                "shift-power identity failed for rule over Z_{}",
                ctx.value()
            )));
        }
        debug_assert_eq!(n.unsigned_abs(), self.degree());
        Ok(ShiftPowerIdentity {
            exponent,
            shift_power: n,
        })
    }

    /// Leftmost/rightmost permutivity of the extreme coefficients.
    pub fn permutivity(&self) -> Result<Permutivity> {
        let (l, r) = self.memory_bounds().ok_or(LcaError::ZeroRule)?;
        let ctx = self.modulus();
        let leftmost = l < 0 && ctx.is_unit_raw(self.coefficient(l));
        let rightmost = r > 0 && ctx.is_unit_raw(self.coefficient(r));
        Ok(Permutivity {
            leftmost,
            rightmost,
            bipermutive: leftmost && rightmost,
        })
    }
}
