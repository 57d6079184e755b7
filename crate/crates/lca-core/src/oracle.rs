//! Independent brute-force verifiers: trajectory-subgroup growth for the
//! entropy formula, kernel search for injectivity, and bounded preimage
//! search for surjectivity witnesses.
//!
//! Nothing in this module looks at reduced supports or component degrees; the
//! oracles work purely through `apply` and exact counting, so they can check
//! the closed-form machinery from the outside.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::ca::{FiniteConfiguration, LinearCA};
use crate::entropy::EntropyValue;
use crate::error::{LcaError, Result};
use crate::snf::smith_diagonal;

/// Default cap on closure enumeration (number of distinct group elements).
pub const DEFAULT_CLOSURE_BUDGET: u64 = 1_000_000;

/// Default cap on backtracking nodes for kernel/preimage search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

/// How a trajectory subgroup order is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrajectoryMethod {
    /// Breadth-first closure of the generator set inside the ambient finite
    /// group. Exact, feasible only while the subgroup fits the budget.
    Closure,
    /// Order via Smith normal form of the integer generator matrix stacked
    /// over m*I on the ambient window. Exact, scales far beyond closure.
    Snf,
}

/// Exact sizes |T_n(S, F)| of the trajectory subgroups
/// T_n = F + S(F) + ... + S^{n-1}(F) for F = P_{s,t}.
#[derive(Clone, Debug)]
pub struct TrajectoryTable {
    rule: LinearCA,
    window: (i64, i64),
    method: TrajectoryMethod,
    sizes: Vec<BigUint>,
    increments: Vec<(BigUint, BigUint)>,
}

impl TrajectoryTable {
    pub fn rule(&self) -> &LinearCA {
        &self.rule
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn method(&self) -> TrajectoryMethod {
        self.method
    }

    /// |T_1|, |T_2|, ... as exact integers.
    pub fn sizes(&self) -> &[BigUint] {
        &self.sizes
    }

    /// Consecutive ratios |T_{n+1}| / |T_n| as reduced fractions. Each is an
    /// integer in disguise (subgroup indices), kept as a pair anyway.
    pub fn increments(&self) -> &[(BigUint, BigUint)] {
        &self.increments
    }

    pub fn steps(&self) -> usize {
        self.sizes.len()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let sizes: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        let increments: Vec<[String; 2]> = self
            .increments
            .iter()
            .map(|(n, d)| [n.to_string(), d.to_string()])
            .collect();
        serde_json::json!({
            "rule": self.rule.to_json_value(),
            "window": [self.window.0, self.window.1],
            "method": serde_json::to_value(self.method).unwrap(),
            "sizes": sizes,
            "increments": increments,
        })
    }
}

/// Final growth ratio of a trajectory table plus a stability flag (three
/// equal trailing increments). The flag is a reporting convention, not a
/// theorem; tests pick N so that stability is verified per instance.
#[derive(Clone, Debug)]
pub struct EntropySlope {
    pub ratio: (BigUint, BigUint),
    pub stable: bool,
}

impl EntropySlope {
    /// Natural log of the ratio.
    pub fn log_ratio(&self) -> f64 {
        let num = self.ratio.0.to_f64().unwrap_or(f64::INFINITY);
        let den = self.ratio.1.to_f64().unwrap_or(f64::INFINITY);
        (num / den).ln()
    }

    /// Exact agreement with a closed-form entropy: the ratio must be the
    /// integer prod m_i^{d_i}.
    pub fn matches(&self, entropy: &EntropyValue) -> bool {
        self.ratio.1.is_one() && self.ratio.0 == entropy.product()
    }
}

fn reduced_ratio(num: &BigUint, den: &BigUint) -> (BigUint, BigUint) {
    let g = num.gcd(den);
    (num / &g, den / &g)
}

/// The generator configurations {S^q(e_j) : 0 <= q < n, s <= j <= t},
/// grouped by power q.
fn generator_levels(
    rule: &LinearCA,
    s: i64,
    t: i64,
    n: usize,
) -> Result<Vec<Vec<FiniteConfiguration>>> {
    let ctx = rule.modulus();
    let base: Vec<FiniteConfiguration> =
        (s..=t).map(|j| FiniteConfiguration::basis(ctx, j)).collect();
    let mut levels = vec![base];
    for _ in 1..n {
        let prev = levels.last().unwrap();
        let next: Result<Vec<_>> = prev.iter().map(|c| rule.apply(c)).collect();
        levels.push(next?);
    }
    Ok(levels)
}

fn window_of(gens: &[&FiniteConfiguration], fallback: (i64, i64)) -> (i64, i64) {
    let mut lo = fallback.0;
    let mut hi = fallback.1;
    for g in gens {
        if let Some((a, b)) = g.support_bounds() {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    (lo, hi)
}

fn closure_order(m: u64, width: usize, gens: &[Vec<u16>], budget: u64) -> Result<usize> {
    let mut visited: HashSet<Vec<u16>> = HashSet::new();
    let zero = vec![0u16; width];
    visited.insert(zero.clone());
    let mut worklist = vec![zero];
    let nonzero_gens: Vec<&Vec<u16>> = gens
        .iter()
        .filter(|g| g.iter().any(|&v| v != 0))
        .collect();
    while let Some(x) = worklist.pop() {
        for g in &nonzero_gens {
            let mut y = Vec::with_capacity(width);
            for (a, b) in x.iter().zip(g.iter()) {
                y.push(((*a as u64 + *b as u64) % m) as u16);
            }
            if !visited.contains(&y) {
                if visited.len() as u64 >= budget {
                    return Err(LcaError::Budget {
                        what: "closure enumeration".into(),
                        limit: budget,
                    });
                }
                visited.insert(y.clone());
                worklist.push(y);
            }
        }
    }
    Ok(visited.len())
}

fn snf_order(m: u64, width: usize, gens: &[Vec<u16>]) -> Result<BigUint> {
    if width > 4096 {
        return Err(LcaError::Budget {
            what: "snf ambient window".into(),
            limit: 4096,
        });
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(gens.len() + width);
    for g in gens {
        rows.push(g.iter().map(|&v| BigInt::from(v)).collect());
    }
    for i in 0..width {
        let mut row = vec![BigInt::zero(); width];
        row[i] = BigInt::from(m);
        rows.push(row);
    }
    let diag = smith_diagonal(rows);
    let mut index = BigInt::one();
    for d in &diag {
        debug_assert!(!d.is_zero(), "stacked m*I rows force full column rank");
        index *= d;
    }
    let ambient = BigUint::from(m).pow(width as u32);
    let index = index.abs().to_biguint().expect("nonnegative");
    debug_assert!((&ambient % &index).is_zero());
    Ok(ambient / index)
}

fn order_for_step(
    rule: &LinearCA,
    levels: &[Vec<FiniteConfiguration>],
    window: (i64, i64),
    step: usize,
    method: TrajectoryMethod,
    budget: u64,
) -> Result<BigUint> {
    let gens: Vec<&FiniteConfiguration> = levels[..step].iter().flatten().collect();
    let (lo, hi) = window_of(&gens, window);
    let width = (hi - lo + 1) as usize;
    let m = rule.modulus().value();
    match method {
        TrajectoryMethod::Closure => {
            if m > u16::MAX as u64 {
                return Err(LcaError::Budget {
                    what: format!("closure enumeration over Z_{m}"),
                    limit: u16::MAX as u64,
                });
            }
            let dense: Vec<Vec<u16>> = gens
                .iter()
                .map(|g| {
                    let mut v = vec![0u16; width];
                    for (idx, val) in g.cells() {
                        v[(idx - lo) as usize] = val as u16;
                    }
                    v
                })
                .collect();
            closure_order(m, width, &dense, budget).map(BigUint::from)
        }
        TrajectoryMethod::Snf => {
            let dense: Vec<Vec<u16>> = gens
                .iter()
                .map(|g| {
                    let mut v = vec![0u16; width];
                    for (idx, val) in g.cells() {
                        v[(idx - lo) as usize] = val as u16;
                    }
                    v
                })
                .collect();
            snf_order(m, width, &dense)
        }
    }
}

/// Like `trajectory_sizes`, but on a budget error returns the table for the
/// largest completed n together with the error instead of discarding it.
pub fn trajectory_sizes_partial(
    rule: &LinearCA,
    s: i64,
    t: i64,
    n: usize,
    method: TrajectoryMethod,
    budget: u64,
) -> (TrajectoryTable, Option<LcaError>) {
    let mut table = TrajectoryTable {
        rule: rule.clone(),
        window: (s, t),
        method,
        sizes: Vec::new(),
        increments: Vec::new(),
    };
    if t < s {
        return (
            table,
            Some(LcaError::Invalid(format!("window [{s}, {t}] is empty"))),
        );
    }
    if n == 0 {
        return (
            table,
            Some(LcaError::Invalid("need at least one trajectory step".into())),
        );
    }
    let levels = match generator_levels(rule, s, t, n) {
        Ok(l) => l,
        Err(e) => return (table, Some(e)),
    };
    for step in 1..=n {
        match order_for_step(rule, &levels, (s, t), step, method, budget) {
            Ok(size) => {
                if let Some(prev) = table.sizes.last() {
                    table.increments.push(reduced_ratio(&size, prev));
                }
                table.sizes.push(size);
            }
            Err(e) => return (table, Some(e)),
        }
    }
    (table, None)
}

/// Exact |T_n(S, P_{s,t})| for n = 1..=n_steps.
pub fn trajectory_sizes(
    rule: &LinearCA,
    s: i64,
    t: i64,
    n_steps: usize,
    method: TrajectoryMethod,
    budget: u64,
) -> Result<TrajectoryTable> {
    let (table, err) = trajectory_sizes_partial(rule, s, t, n_steps, method, budget);
    match err {
        None => Ok(table),
        Some(e) => Err(e),
    }
}

/// Final increment of the table as the slope estimate.
pub fn entropy_slope(table: &TrajectoryTable) -> Result<EntropySlope> {
    if table.sizes.len() < 3 {
        return Err(LcaError::TableTooShort(table.sizes.len()));
    }
    let ratio = table.increments.last().expect("n >= 3").clone();
    let k = table.increments.len();
    let stable = k >= 3 && table.increments[k - 3..].iter().all(|r| *r == ratio);
    Ok(EntropySlope { ratio, stable })
}

struct WindowSearch {
    m: u64,
    cells: Vec<u64>,
    /// outputs finalized when cell position idx is assigned:
    /// (target value, deps as (cell position, coefficient))
    finalize_at: Vec<Vec<(u64, Vec<(usize, u64)>)>>,
    nodes: u64,
    budget: u64,
}

impl WindowSearch {
    fn run(&mut self, depth: usize, require_nonzero: bool) -> Result<bool> {
        if depth == self.cells.len() {
            return Ok(!require_nonzero || self.cells.iter().any(|&v| v != 0));
        }
        for v in 0..self.m {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(LcaError::Budget {
                    what: "window search".into(),
                    limit: self.budget,
                });
            }
            self.cells[depth] = v;
            let mut ok = true;
            for (target, deps) in &self.finalize_at[depth] {
                let mut acc = 0u128;
                for &(pos, coeff) in deps {
                    acc += coeff as u128 * self.cells[pos] as u128;
                }
                if (acc % self.m as u128) as u64 != *target {
                    ok = false;
                    break;
                }
            }
            if ok && self.run(depth + 1, require_nonzero)? {
                return Ok(true);
            }
        }
        self.cells[depth] = 0;
        Ok(false)
    }
}

fn search_window(
    rule: &LinearCA,
    target: &FiniteConfiguration,
    w: i64,
    budget: u64,
    require_nonzero: bool,
) -> Result<Option<FiniteConfiguration>> {
    let ctx = rule.modulus();
    if ctx != target.modulus() {
        return Err(LcaError::ModulusMismatch {
            left: ctx.value(),
            right: target.modulus().value(),
        });
    }
    let width = (2 * w + 1) as usize;
    let lo = -w;
    // outputs that can possibly be nonzero given supp(c) within the window
    let mut finalize_at: Vec<Vec<(u64, Vec<(usize, u64)>)>> = vec![Vec::new(); width];
    let mut covered: HashSet<i64> = HashSet::new();
    if let Some((l, r)) = rule.memory_bounds() {
        for n in (-w - r)..=(w - l) {
            let deps: Vec<(usize, u64)> = rule
                .coefficients()
                .filter_map(|(i, c)| {
                    let cell = n + i;
                    (cell >= -w && cell <= w).then(|| ((cell - lo) as usize, c))
                })
                .collect();
            if deps.is_empty() {
                continue;
            }
            covered.insert(n);
            let last = deps.iter().map(|&(pos, _)| pos).max().unwrap();
            finalize_at[last].push((target.cell(n), deps));
        }
    }
    // target values at positions no window cell can reach must already be zero
    for (n, v) in target.cells() {
        if v != 0 && !covered.contains(&n) {
            return Ok(None);
        }
    }
    let mut search = WindowSearch {
        m: ctx.value(),
        cells: vec![0; width],
        finalize_at,
        nodes: 0,
        budget,
    };
    if search.run(0, require_nonzero)? {
        let cells: Vec<(i64, i64)> = search
            .cells
            .iter()
            .enumerate()
            .map(|(idx, &v)| (lo + idx as i64, v as i64))
            .collect();
        Ok(Some(FiniteConfiguration::new(ctx, cells)))
    } else {
        Ok(None)
    }
}

/// Searches for a nonzero configuration supported in [-w, w] that the rule
/// sends to zero. Absence proves injectivity only relative to the window.
pub fn kernel_search(
    rule: &LinearCA,
    w: i64,
    budget: u64,
) -> Result<Option<FiniteConfiguration>> {
    let zero = FiniteConfiguration::zero(rule.modulus());
    search_window(rule, &zero, w, budget, true)
}

/// Searches for a configuration supported in [-w, w] mapping onto `target`.
/// A `None` certifies only that no preimage lives in the window; it is never
/// used on its own to assert non-surjectivity.
pub fn preimage_search(
    rule: &LinearCA,
    target: &FiniteConfiguration,
    w: i64,
    budget: u64,
) -> Result<Option<FiniteConfiguration>> {
    search_window(rule, target, w, budget, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::Modulus;

    fn m(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    fn sizes_u64(table: &TrajectoryTable) -> Vec<u64> {
        table.sizes().iter().map(|s| s.to_u64().unwrap()).collect()
    }

    #[test]
    fn shift_trajectory_over_z2() {
        let m2 = m(2);
        let sigma = LinearCA::shift(&m2, 1);
        for method in [TrajectoryMethod::Closure, TrajectoryMethod::Snf] {
            let table =
                trajectory_sizes(&sigma, 0, 0, 5, method, DEFAULT_CLOSURE_BUDGET).unwrap();
            assert_eq!(sizes_u64(&table), vec![2, 4, 8, 16, 32]);
        }
    }

    #[test]
    fn identity_trajectory_is_constant() {
        let m6 = m(6);
        let id = LinearCA::identity(&m6);
        let table = trajectory_sizes(
            &id,
            -1,
            1,
            4,
            TrajectoryMethod::Closure,
            DEFAULT_CLOSURE_BUDGET,
        )
        .unwrap();
        assert_eq!(sizes_u64(&table), vec![216, 216, 216, 216]);
        let slope = entropy_slope(&table).unwrap();
        assert!(slope.stable);
        assert!(slope.ratio.0.is_one() && slope.ratio.1.is_one());
    }

    #[test]
    fn composite_example_stabilizes_at_three() {
        let m6 = m(6);
        let s = LinearCA::new(&m6, [(-1, 4), (0, 3)]);
        let table = trajectory_sizes(
            &s,
            -1,
            1,
            6,
            TrajectoryMethod::Closure,
            DEFAULT_CLOSURE_BUDGET,
        )
        .unwrap();
        let slope = entropy_slope(&table).unwrap();
        assert!(slope.stable);
        assert_eq!(slope.ratio.0.to_u64().unwrap(), 3);
        assert!(slope.ratio.1.is_one());
        assert!(slope.matches(&s.algebraic_entropy()));
    }

    #[test]
    fn degree_two_rule_ratio_sixteen() {
        // leftmost permutive with l = -2, so the window must have the shape
        // P_{-h, k+2} with k >= 1 for the trajectory identity; P_{0,3} is the
        // smallest such window and the ratio is m^2 = 16
        let m4 = m(4);
        let s = LinearCA::new(&m4, [(-2, 1), (-1, 2)]);
        let table =
            trajectory_sizes(&s, 0, 3, 5, TrajectoryMethod::Snf, DEFAULT_CLOSURE_BUDGET)
                .unwrap();
        let expected: Vec<BigUint> = (1..=5u32)
            .map(|n| BigUint::from(4u64).pow(2 * n + 2))
            .collect();
        assert_eq!(table.sizes(), expected.as_slice());
        let slope = entropy_slope(&table).unwrap();
        assert!(slope.stable);
        assert_eq!(slope.ratio.0.to_u64().unwrap(), 16);
        assert!((slope.log_ratio() - 2.0 * 4f64.ln()).abs() < 1e-9);
        assert!(slope.matches(&s.algebraic_entropy()));

        let closure = trajectory_sizes(
            &s,
            0,
            3,
            3,
            TrajectoryMethod::Closure,
            DEFAULT_CLOSURE_BUDGET,
        )
        .unwrap();
        assert_eq!(closure.sizes(), &table.sizes()[..3]);
    }

    #[test]
    fn single_cell_window_undershoots() {
        // the same rule over the width-1 window P_{0,0}: S^q(e_0) alternates
        // between e_{2q} and 2e_{2q-1} + e_{2q}, so each step adds one free
        // generator and the trajectory only grows by m per step
        let m4 = m(4);
        let s = LinearCA::new(&m4, [(-2, 1), (-1, 2)]);
        let table = trajectory_sizes(
            &s,
            0,
            0,
            5,
            TrajectoryMethod::Closure,
            DEFAULT_CLOSURE_BUDGET,
        )
        .unwrap();
        assert_eq!(sizes_u64(&table), vec![4, 16, 64, 256, 1024]);
        let slope = entropy_slope(&table).unwrap();
        assert!(slope.stable);
        assert_eq!(slope.ratio.0.to_u64().unwrap(), 4);
    }

    #[test]
    fn closure_and_snf_agree() {
        let m6 = m(6);
        for rule in [
            LinearCA::new(&m6, [(-1, 4), (0, 3)]),
            LinearCA::new(&m6, [(0, 3), (1, 2)]),
            LinearCA::new(&m6, [(-1, 1), (1, 5)]),
            LinearCA::zero(&m6),
        ] {
            let a = trajectory_sizes(
                &rule,
                -1,
                1,
                4,
                TrajectoryMethod::Closure,
                DEFAULT_CLOSURE_BUDGET,
            )
            .unwrap();
            let b = trajectory_sizes(
                &rule,
                -1,
                1,
                4,
                TrajectoryMethod::Snf,
                DEFAULT_CLOSURE_BUDGET,
            )
            .unwrap();
            assert_eq!(a.sizes(), b.sizes());
        }
    }

    #[test]
    fn closure_budget_is_explicit() {
        let m6 = m(6);
        let sigma = LinearCA::shift(&m6, 1);
        let err = trajectory_sizes(&sigma, -2, 2, 9, TrajectoryMethod::Closure, 1000)
            .unwrap_err();
        assert!(matches!(err, LcaError::Budget { .. }));
        let (partial, err) =
            trajectory_sizes_partial(&sigma, -2, 2, 9, TrajectoryMethod::Closure, 1000);
        assert!(err.is_some());
        assert!(!partial.sizes().is_empty());
        assert!(partial.steps() < 9);
    }

    #[test]
    fn kernel_search_examples() {
        let m4 = m(4);
        let doubling = LinearCA::new(&m4, [(0, 2)]);
        let witness = kernel_search(&doubling, 0, DEFAULT_SEARCH_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(witness, FiniteConfiguration::new(&m4, [(0, 2)]));
        assert!(doubling.apply(&witness).unwrap().is_zero());

        let m3 = m(3);
        let biperm = LinearCA::new(&m3, [(-1, 1), (0, 1), (1, 1)]);
        assert!(kernel_search(&biperm, 2, DEFAULT_SEARCH_BUDGET)
            .unwrap()
            .is_none());

        let m6 = m(6);
        let injective = LinearCA::new(&m6, [(0, 1), (1, 2)]);
        assert!(kernel_search(&injective, 3, DEFAULT_SEARCH_BUDGET)
            .unwrap()
            .is_none());
    }

    #[test]
    fn preimage_search_examples() {
        let m6 = m(6);
        let s = LinearCA::new(&m6, [(0, 3), (1, 2)]);
        let target = FiniteConfiguration::basis(&m6, 0);
        let found = preimage_search(&s, &target, 1, DEFAULT_SEARCH_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(s.apply(&found).unwrap(), target);
        let via_inverse = s.invert().unwrap().apply(&target).unwrap();
        assert_eq!(found, via_inverse);

        let m3 = m(3);
        let biperm = LinearCA::new(&m3, [(-1, 1), (0, 1), (1, 1)]);
        let e0 = FiniteConfiguration::basis(&m3, 0);
        assert!(preimage_search(&biperm, &e0, 3, DEFAULT_SEARCH_BUDGET)
            .unwrap()
            .is_none());

        let zero = FiniteConfiguration::zero(&m3);
        let found = preimage_search(&biperm, &zero, 2, DEFAULT_SEARCH_BUDGET)
            .unwrap()
            .unwrap();
        assert!(found.is_zero());
    }

    #[test]
    fn search_budget_is_explicit() {
        let m3 = m(3);
        let biperm = LinearCA::new(&m3, [(-1, 1), (0, 1), (1, 1)]);
        assert!(matches!(
            kernel_search(&biperm, 3, 5),
            Err(LcaError::Budget { .. })
        ));
    }
}
