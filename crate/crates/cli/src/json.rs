//! JSON shapes shared by several commands.

use num_complex::Complex64;
use paper_protocols::GateMatrix;
use serde_json::{json, Value};

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn vector(v: &[Complex64]) -> Value {
    Value::Array(v.iter().copied().map(complex).collect())
}

/// Components below this are printed as zero in gate matrices.
pub const MATRIX_ZERO: f64 = 1e-12;

fn snap(x: f64) -> f64 {
    if x.abs() < MATRIX_ZERO {
        0.0
    } else {
        x
    }
}

/// Rows of `{re, im}` entries on the matrix's labelled basis, rounding-noise components zeroed.
pub fn matrix(m: &GateMatrix) -> Value {
    let rows: Vec<Value> = m
        .rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(|z| complex(Complex64::new(snap(z.re), snap(z.im)))).collect()))
        .collect();
    json!({ "basis": m.basis(), "rows": rows })
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
