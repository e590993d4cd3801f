//! CSV and JSON emitters for the datasets produced by this crate.
//!
//! Floats are written in the shortest form that parses back to the same
//! bits. JSON documents carry a `schema_version` field.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::Result;
use crate::model::{ComplexMatrix2, FourierOperatorSeries};
use crate::sambe::SplittingGrid;
use crate::symmetry_analytic::RecurrenceSolution;
use crate::symmetry_numeric::{Classification, ParitySolution};

pub const SCHEMA_VERSION: u32 = 1;

/// Round-trip float formatting; exponent form outside `[1e-5, 1e16)`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

/// One row per node, ε-major: `epsilon/omega,alpha/omega,splitting/omega`.
pub fn write_splitting_csv<W: Write>(grid: &SplittingGrid, out: W) -> Result<()> {
    let w = grid.params_base.omega();
    let mut csv = csv_writer(out);
    csv.write_record(["epsilon/omega", "alpha/omega", "splitting/omega"])?;
    for (eps, row) in grid.epsilon_values.iter().zip(&grid.splittings) {
        for (alpha, s) in grid.alpha_values.iter().zip(row) {
            csv.write_record([format_float(eps / w), format_float(alpha / w), format_float(s / w)])?;
        }
    }
    csv.flush()?;
    Ok(())
}

pub fn splitting_json(grid: &SplittingGrid) -> Value {
    let w = grid.params_base.omega();
    let scaled = |v: &[f64]| v.iter().map(|x| x / w).collect::<Vec<_>>();
    json!({
        "schema_version": SCHEMA_VERSION,
        "units": "omega",
        "beta": grid.params_base.beta() / w,
        "omega": w,
        "epsilon": scaled(&grid.epsilon_values),
        "alpha": scaled(&grid.alpha_values),
        "splitting": grid.splittings.iter().map(|r| scaled(r)).collect::<Vec<_>>(),
    })
}

/// `{ n, lambda: {"k": λ_k}, mu: {"k": μ_k}, norm_constant }`.
pub fn recurrence_json(sol: &RecurrenceSolution) -> Value {
    let family = |f: &dyn Fn(i32) -> f64| {
        sol.ks().map(|k| (k.to_string(), json!(f(k)))).collect::<Map<String, Value>>()
    };
    json!({
        "schema_version": SCHEMA_VERSION,
        "n": sol.n,
        "lambda": family(&|k| sol.lambda(k)),
        "mu": family(&|k| sol.mu(k)),
        "norm_constant": sol.norm_constant,
    })
}

pub fn write_recurrence_csv<W: Write>(sol: &RecurrenceSolution, out: W) -> Result<()> {
    let mut csv = csv_writer(out);
    csv.write_record(["k", "lambda_k", "mu_k"])?;
    for k in sol.ks() {
        csv.write_record([k.to_string(), format_float(sol.lambda(k)), format_float(sol.mu(k))])?;
    }
    csv.flush()?;
    Ok(())
}

/// `[[[re, im], [re, im]], [[re, im], [re, im]]]`
pub fn matrix_json(m: &ComplexMatrix2) -> Value {
    let entry = |r: usize, c: usize| json!([m[(r, c)].re, m[(r, c)].im]);
    json!([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
}

/// `[{ "k": k, "matrix": … }, …]` over the stored range.
pub fn series_json(q: &FourierOperatorSeries) -> Value {
    Value::Array(
        q.ks()
            .map(|k| json!({ "k": k, "matrix": matrix_json(&q.coeff(k)) }))
            .collect(),
    )
}

pub fn parity_solution_json(sol: &ParitySolution) -> Value {
    json!({
        "n_detected": sol.n_detected,
        "j": sol.j,
        "residual": sol.residual,
        "singular_gap": sol.singular_gap,
        "magnitude_spread": sol.magnitude_spread,
        "q": series_json(&sol.q_series),
    })
}

/// `alpha/omega,zone_index,quasienergy/omega,parity`; parity left empty
/// when absent.
pub fn write_classification_csv<W: Write>(c: &Classification, omega: f64, out: W) -> Result<()> {
    let mut csv = csv_writer(out);
    csv.write_record(["alpha/omega", "zone_index", "quasienergy/omega", "parity"])?;
    for r in &c.rows {
        csv.write_record([
            format_float(r.alpha / omega),
            r.zone_index.to_string(),
            format_float(r.quasienergy / omega),
            r.parity.map(format_float).unwrap_or_default(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn classification_json(c: &Classification, omega: f64) -> Value {
    let rows: Vec<Value> = c
        .rows
        .iter()
        .map(|r| {
            json!({
                "alpha": r.alpha / omega,
                "zone_index": r.zone_index,
                "quasienergy": r.quasienergy / omega,
                "parity": r.parity,
            })
        })
        .collect();
    let sources: Vec<Value> = c
        .sources
        .iter()
        .map(|(alpha, s)| {
            let mut v = serde_json::to_value(s).expect("plain data");
            v["alpha"] = json!(alpha / omega);
            v
        })
        .collect();
    json!({ "schema_version": SCHEMA_VERSION, "units": "omega", "rows": rows, "diagnostics": sources })
}

/// Pretty-printed JSON followed by a newline.
pub fn write_json<W: Write>(value: &Value, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}
