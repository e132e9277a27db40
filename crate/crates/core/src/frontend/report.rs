//! JSON rendering of results.
//!
//! Exact scalars and polynomials are emitted as strings; object keys are
//! sorted, so a report is a pure function of its inputs.

use serde_json::{json, Value};

use crate::error::Error;
use crate::least::LeastSpace;
use crate::monomial::MultiIndex;
use crate::pairing::annihilator_basis;
use crate::{Poly, Scalar};

pub const SCHEMA_VERSION: u32 = 1;

pub fn scalar(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn scalars(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

pub fn poly(p: &Poly, names: &[String]) -> Value {
    Value::String(p.display_with(names))
}

pub fn polys(ps: &[Poly], names: &[String]) -> Value {
    Value::Array(ps.iter().map(|p| poly(p, names)).collect())
}

pub fn monomial(mu: &MultiIndex, names: &[String]) -> Value {
    Value::String(mu.display_with(names))
}

pub fn error(e: &Error) -> Value {
    json!({ "code": e.code(), "message": e.to_string() })
}

/// An approximate real number: six decimals, flagged as such.
pub fn approximate(x: Option<f64>, caveat: &str) -> Value {
    json!({
        "value": x.map(|v| format!("{v:.6}")),
        "approximate": true,
        "caveat": caveat,
    })
}

/// Least space in shifted coordinates named like the source variables.
pub fn least_space(l: &LeastSpace<Scalar>, names: &[String]) -> Value {
    let escape = l.d_invariance().map(|e| {
        json!({
            "element": poly(&e.element, names),
            "variable": names[e.variable],
            "derivative": poly(&e.derivative, names),
        })
    });
    let ann = annihilator_basis(l, None);
    json!({
        "dimension": l.dim(),
        "basis": polys(&l.basis(), names),
        "degrees": l.degrees(),
        "theta": l.max_degree(),
        "lambda": l.full_degree(),
        "dInvariant": escape.is_none(),
        "escape": escape,
        "verifiedOrder": l.verified_order(),
        "annihilator": {
            "degreeBound": ann.degree_bound,
            "monomialGenerators": ann
                .monomial_generators
                .map(|g| g.iter().map(|m| monomial(m, names)).collect::<Vec<_>>()),
            // indexed by degree
            "perDegree": ann.per_degree.values().map(|b| polys(b, names)).collect::<Vec<_>>(),
        },
    })
}

/// Pretty-printed report with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports are plain JSON values");
    s.push('\n');
    s
}
