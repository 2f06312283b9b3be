//! Configuration, the verification suite and the operations behind the
//! `qdiff` command line.

mod config;
mod suite;

pub use config::{
    Bounds, FieldChoice, MatrixChoice, NormalizationChoice, RepSetup, SlotConfig, SlotKind, Workbench, WorkbenchConfig,
};
pub use suite::{run_verification_suite, CheckRecord, Status, SuiteOptions, Summary, VerificationReport};

use serde_json::{json, Value};

use crate::error::Result;
use crate::expr::parse_element;
use crate::linalg::Matrix;
use crate::moment::moment_ideal_reduce;
use crate::root_of_unity::build_irrep;
use crate::scalars::Scalar;

/// Canonical form of an expression in the configured algebra.
pub fn eval(wb: &Workbench, expr: &str) -> Result<String> {
    Ok(parse_element(expr, &wb.spec)?.to_string())
}

/// Canonical representative of an expression modulo the moment ideal.
pub fn reduce(wb: &Workbench, expr: &str) -> Result<String> {
    let u = parse_element(expr, &wb.spec)?;
    Ok(moment_ideal_reduce(&u, &wb.datum()?)?.to_string())
}

/// Coordinates over `1, ζ, …, ζ^{φ(l)−1}` as exact rational strings.
fn coefficient_vector(s: &Scalar) -> Value {
    let coeffs = s.cyclo_coeffs().expect("representations live over a cyclotomic field");
    Value::Array(
        coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    json!(c.numer().to_string())
                } else {
                    json!(format!("{}/{}", c.numer(), c.denom()))
                }
            })
            .collect(),
    )
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array(m.row(i).iter().map(coefficient_vector).collect()))
            .collect(),
    )
}

/// Builds every configured representation and dumps its matrices row-major,
/// each entry a coefficient vector over the power basis of `ℚ(ζ_l)`.
pub fn rep_dump(wb: &Workbench) -> Result<Value> {
    let mut reps = Vec::new();
    for (k, setup) in wb.reps.iter().enumerate() {
        let rep = build_irrep(&setup.slots, &wb.field)?;
        reps.push(json!({
            "index": k + 1,
            "dim": rep.dim(),
            "X": rep.x().iter().map(matrix_json).collect::<Vec<_>>(),
            "Y": rep.y().iter().map(matrix_json).collect::<Vec<_>>(),
        }));
    }
    Ok(json!({
        "field": wb.field.to_string(),
        "l": wb.field.l(),
        "basis": format!("coefficients of zeta^0 .. zeta^{}", wb.field.phi().unwrap_or(1) - 1),
        "reps": reps,
    }))
}
