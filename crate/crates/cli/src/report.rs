//! Report layout and JSON encodings of the core objects.

use kapranov::coalgebra::{Coderivation, Variant};
use kapranov::maps::{Multilinear, Symmetry};
use kapranov::scalar::format_scalar;
use kapranov::{GradedSpace, Vector};
use serde::Serialize;
use serde_json::{json, Value};

use crate::document::constants;

/// Every field is emitted in declaration order; `details` is a JSON object
/// whose keys serialize sorted.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub kind: String,
    pub input_sha256: String,
    pub max_arity: usize,
    pub semantics: String,
    pub verdict: String,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub const TRUNCATED: &str = "SUPPORTED(N): no obstruction in arities up to N, which is evidence and not a proof; \
REFUTED: an obstruction was found, which is conclusive at every truncation";
pub const EXHAUSTIVE: &str = "PASS: every check holds exactly up to arity N; FAIL: the failing entries are reported";

pub fn names(sp: &GradedSpace, gens: &[usize]) -> Vec<String> {
    gens.iter().map(|&g| sp.name(g).to_string()).collect()
}

pub fn vector(sp: &GradedSpace, v: &Vector) -> Value {
    Value::Array(v.iter().map(|(g, c)| json!({"gen": sp.name(g), "coeff": format_scalar(c)})).collect())
}

pub fn map<S: Symmetry>(m: &Multilinear<S>) -> Value {
    serde_json::to_value(constants(m)).expect("constants serialize")
}

/// Nonzero Taylor coefficients, plus `q0` for non-reduced coderivations.
pub fn coder(c: &Coderivation) -> Value {
    let taylor: Vec<Value> = (1..=c.max_arity())
        .filter(|&n| !c.coefficient(n).is_zero())
        .map(|n| json!({"arity": n, "terms": map(c.coefficient(n))}))
        .collect();
    let mut out = json!({"degree": c.degree(), "taylor": taylor});
    if c.variant() == Variant::Nonreduced {
        out["q0"] = vector(c.space(), c.q0());
    }
    out
}

pub fn dims(d: &std::collections::BTreeMap<i64, usize>) -> Value {
    Value::Array(d.iter().map(|(k, n)| json!({"degree": k, "dim": n})).collect())
}
