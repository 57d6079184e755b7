//! The analysis report assembled by `lca analyze` and the C API.
//!
//! Reports are plain `serde_json::Value`s; the default serde_json map is
//! BTreeMap-backed, so key order (and therefore byte output) is deterministic.

use serde_json::{json, Value};

use crate::ca::LinearCA;
use crate::entropy::entropy_of_shift;

fn rule_entry(rule: &LinearCA) -> Value {
    json!({
        "modulus": rule.modulus().value(),
        "lambda": rule.to_json_value()["lambda"],
        "poly": rule.to_poly().to_string(),
        "supp": rule.support(),
        "supp_star": rule.reduced_support(),
        "degree": rule.degree(),
    })
}

/// Full structural and entropy report for a rule.
pub fn analyze(rule: &LinearCA) -> Value {
    let classification = rule.classify();
    let decomposition = rule.decompose();
    let components: Vec<Value> = decomposition.components().iter().map(rule_entry).collect();
    let entropy = rule.algebraic_entropy();
    let dual_entropy = rule.topological_entropy_of_dual();
    let permutivity = rule
        .permutivity()
        .map(|p| serde_json::to_value(p).unwrap())
        .unwrap_or(Value::Null);
    let shift_power = if rule.modulus().is_prime_power() && classification.s_surjective {
        serde_json::to_value(rule.shift_power_identity().unwrap()).unwrap()
    } else {
        Value::Null
    };
    let shift_equivalent = rule
        .shift_equivalent_exponent()
        .map(|n| json!(n))
        .unwrap_or(Value::Null);

    json!({
        "m": rule.modulus().value(),
        "lambda": rule.to_json_value()["lambda"],
        "poly": rule.to_poly().to_string(),
        "supp": rule.support(),
        "supp_star": rule.reduced_support(),
        "degree": rule.degree(),
        "components": components,
        "classification": serde_json::to_value(&classification).unwrap(),
        "entropy": serde_json::to_value(&entropy).unwrap(),
        "dual_topological_entropy": serde_json::to_value(&dual_entropy).unwrap(),
        "shift_equivalent_exponent": shift_equivalent,
        "permutivity": permutivity,
        "shift_power_identity": shift_power,
    })
}

/// Report for `lca oracle`: the trajectory table plus the verdict comparing
/// the stable slope against the closed-form entropy.
pub fn oracle_report(
    table: &crate::oracle::TrajectoryTable,
    slope: Option<&crate::oracle::EntropySlope>,
) -> Value {
    let entropy = table.rule().algebraic_entropy();
    let verdict = match slope {
        None => "too-short",
        Some(s) if !s.stable => "unstable",
        Some(s) if s.matches(&entropy) => "match",
        Some(_) => "mismatch",
    };
    let mut value = table.to_json_value();
    let map = value.as_object_mut().unwrap();
    map.insert("formula_entropy".into(), json!(entropy));
    if let Some(s) = slope {
        map.insert(
            "slope_ratio".into(),
            json!([s.ratio.0.to_string(), s.ratio.1.to_string()]),
        );
        map.insert("stable".into(), json!(s.stable));
    }
    map.insert("verdict".into(), json!(verdict));
    // what the stable ratio would be for each shift power, for context
    map.insert(
        "shift_entropy".into(),
        json!(entropy_of_shift(table.rule().modulus(), 1)),
    );
    value
}
