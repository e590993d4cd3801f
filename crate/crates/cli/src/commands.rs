use clap::ArgMatches;
use floquet_core::io::{
    classification_json, format_float, matrix_json, parity_solution_json, series_json, splitting_json,
    write_classification_csv, write_json, write_splitting_csv, SCHEMA_VERSION,
};
use floquet_core::sambe::{default_truncation, quasienergy_spectrum, select_representatives};
use floquet_core::symmetry_analytic::{assemble_q, check_identities, solve_recurrence, table_reference};
use floquet_core::symmetry_numeric::{
    assign_parities, classify_spectrum, default_check_cutoff, parity_hilbert, parity_sambe, solve_parities,
    symmetry_operator, ParitySource, DEFAULT_SV_TOL,
};
use floquet_core::{Error, FourierOperatorSeries, HamiltonianParams};
use rand::{rngs::StdRng, Rng, SeedableRng};
use serde_json::{json, Value};

use crate::config::{Format, Range, Settings};
use crate::output::Sink;
use crate::{CliError, Common};

/// Largest relative coefficient error accepted by `verify-table`.
const TABLE_TOL: f64 = 1e-10;

fn check_kmax(common: &Common) -> Result<(), CliError> {
    match common.kmax {
        Some(0) => Err(CliError::Usage("--kmax must be at least 1".into())),
        _ => Ok(()),
    }
}

fn params_json(p: &HamiltonianParams) -> Value {
    let w = p.omega();
    json!({
        "epsilon": p.epsilon() / w,
        "beta": p.beta() / w,
        "alpha": p.alpha() / w,
        "omega": w,
        "n": p.n(),
    })
}

fn json_bytes(value: &Value) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_json(value, &mut buf)?;
    Ok(buf)
}

pub fn spectrum(common: &Common, sub: &ArgMatches, epsilon: f64, beta: f64, alpha: Range) -> Result<(), CliError> {
    check_kmax(common)?;
    let settings = Settings::load(common)?;
    let (omega, scale) = settings.frequency(sub, common)?;
    let epsilon: f64 = settings.resolve(sub, "epsilon", epsilon)?;
    let beta: f64 = settings.resolve(sub, "beta", beta)?;
    let alpha: Range = settings.resolve(sub, "alpha", alpha)?;
    let base = HamiltonianParams::new(epsilon * scale, beta * scale, 0.0, omega)?;
    let sink = Sink::open(&common.output)?;

    let classification = classify_spectrum(&base, &alpha.values(scale), common.kmax)?;
    let absent = classification.sources.iter().filter(|(_, s)| *s == ParitySource::Absent).count();
    if absent > 0 {
        eprintln!(
            "note: no symmetry detected at {absent} of {} alpha points (epsilon/omega = {}); parity left empty there",
            classification.sources.len(),
            format_float(base.epsilon() / omega)
        );
    }
    let payload = match common.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_classification_csv(&classification, omega, &mut buf)?;
            buf
        }
        Format::Json => {
            let mut v = classification_json(&classification, omega);
            v["params"] = params_json(&base);
            json_bytes(&v)?
        }
    };
    sink.commit("spectrum", &payload)
}

pub fn splitting_map(
    common: &Common,
    sub: &ArgMatches,
    epsilon: Range,
    beta: f64,
    alpha: Range,
) -> Result<(), CliError> {
    check_kmax(common)?;
    let settings = Settings::load(common)?;
    let (omega, scale) = settings.frequency(sub, common)?;
    let epsilon: Range = settings.resolve(sub, "epsilon", epsilon)?;
    let beta: f64 = settings.resolve(sub, "beta", beta)?;
    let alpha: Range = settings.resolve(sub, "alpha", alpha)?;
    let base = HamiltonianParams::new(0.0, beta * scale, 0.0, omega)?;
    let sink = Sink::open(&common.output)?;

    let grid = floquet_core::sambe::splitting_map(&base, &epsilon.values(scale), &alpha.values(scale), common.kmax)?;
    let payload = match common.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_splitting_csv(&grid, &mut buf)?;
            buf
        }
        Format::Json => json_bytes(&splitting_json(&grid))?,
    };
    sink.commit("splitting-map", &payload)
}

fn point_params(
    settings: &Settings,
    sub: &ArgMatches,
    common: &Common,
    epsilon: f64,
    beta: f64,
    alpha: f64,
) -> Result<HamiltonianParams, CliError> {
    let (omega, scale) = settings.frequency(sub, common)?;
    let epsilon: f64 = settings.resolve(sub, "epsilon", epsilon)?;
    let beta: f64 = settings.resolve(sub, "beta", beta)?;
    let alpha: f64 = settings.resolve(sub, "alpha", alpha)?;
    Ok(HamiltonianParams::new(epsilon * scale, beta * scale, alpha * scale, omega)?)
}

pub fn parity(common: &Common, sub: &ArgMatches, epsilon: f64, beta: f64, alpha: f64) -> Result<(), CliError> {
    check_kmax(common)?;
    let settings = Settings::load(common)?;
    let p = point_params(&settings, sub, common, epsilon, beta, alpha)?;
    let sink = Sink::open(&common.output)?;

    let kmax = common.kmax.unwrap_or_else(|| default_truncation(&p));
    let spectrum = quasienergy_spectrum(&p, kmax)?;
    let mut reps = select_representatives(&spectrum)?;
    let operator = symmetry_operator(&p, &reps, default_check_cutoff(kmax))?;
    let (q, source) = match operator {
        Some((q, source)) => {
            assign_parities(&mut reps, &q)?;
            (Some(q), source)
        }
        None => {
            eprintln!("note: no symmetry detected; parities are absent");
            (None, ParitySource::Absent)
        }
    };
    let omega = p.omega();
    let mut modes = Vec::new();
    for (nu, m) in reps.iter().enumerate() {
        let (sambe, hilbert) = match &q {
            Some(q) => (Some(parity_sambe(m, q)), Some(parity_hilbert(m, q, 0.0)?)),
            None => (None, None),
        };
        modes.push((nu, m.quasienergy / omega, sambe, hilbert));
    }
    let payload = match common.format {
        Format::Csv => {
            let mut text = String::from("nu,quasienergy/omega,parity_sambe,parity_hilbert\n");
            let opt = |x: Option<f64>| x.map(format_float).unwrap_or_default();
            for (nu, q, s, h) in &modes {
                text += &format!("{nu},{},{},{}\n", format_float(*q), opt(*s), opt(*h));
            }
            text.into_bytes()
        }
        Format::Json => json_bytes(&json!({
            "schema_version": SCHEMA_VERSION,
            "units": "omega",
            "params": params_json(&p),
            "diagnostics": source,
            "modes": modes
                .iter()
                .map(|(nu, q, s, h)| json!({ "nu": nu, "quasienergy": q, "parity_sambe": s, "parity_hilbert": h }))
                .collect::<Vec<_>>(),
            "q": q.as_ref().map(series_json),
        }))?,
    };
    sink.commit("parity", &payload)
}

struct TableRow {
    n: u32,
    alpha: f64,
    beta: f64,
    omega: f64,
    max_error: f64,
    /// `(k, family, recurrence, table, relative error)` above tolerance
    mismatches: Vec<(i32, &'static str, f64, f64, f64)>,
}

fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn compare_table(n: u32, alpha: f64, beta: f64, omega: f64) -> Result<TableRow, CliError> {
    let p = HamiltonianParams::new(n as f64 * omega, beta, alpha, omega)?;
    let solved = solve_recurrence(&p)?;
    let table = table_reference(n, alpha, beta, omega)?;
    let mut row = TableRow { n, alpha, beta, omega, max_error: 0.0, mismatches: Vec::new() };
    for k in solved.ks() {
        for (family, a, b) in [("lambda", solved.lambda(k), table.lambda(k)), ("mu", solved.mu(k), table.mu(k))] {
            let e = relative_error(a, b);
            row.max_error = row.max_error.max(e);
            if e > TABLE_TOL {
                row.mismatches.push((k, family, a, b, e));
            }
        }
    }
    Ok(row)
}

pub fn verify_table(
    common: &Common,
    sub: &ArgMatches,
    n: Option<u32>,
    point: Option<(f64, f64)>,
    points: usize,
    seed: u64,
) -> Result<(), CliError> {
    let settings = Settings::load(common)?;
    let (omega, scale) = settings.frequency(sub, common)?;
    let orders: Vec<u32> = match n {
        Some(n) if n > 4 => return Err(CliError::Usage(format!("tabulated coefficients exist for n <= 4, got {n}"))),
        Some(n) => vec![n],
        None => (0..=4).collect(),
    };
    let samples: Vec<(f64, f64, f64)> = match point {
        Some((a, b)) => vec![(a * scale, b * scale, omega)],
        None => {
            if points == 0 {
                return Err(CliError::Usage("--points must be at least 1".into()));
            }
            let mut rng = StdRng::seed_from_u64(seed);
            (0..points)
                .map(|_| {
                    let w = rng.random_range(0.5..2.0);
                    (rng.random_range(0.2..3.0) * w, rng.random_range(0.2..3.0) * w, w)
                })
                .collect()
        }
    };
    let sink = Sink::open(&common.output)?;

    let mut rows = Vec::new();
    for &order in &orders {
        for &(a, b, w) in &samples {
            rows.push(compare_table(order, a, b, w)?);
        }
    }
    let first_bad = rows.iter().find_map(|r| r.mismatches.first().map(|m| (r.n, m.0)));
    let worst = rows.iter().map(|r| r.max_error).fold(0.0, f64::max);
    let payload = match common.format {
        Format::Csv => {
            let mut text = String::from("n,alpha/omega,beta/omega,omega,max_relative_error,status\n");
            for r in &rows {
                text += &format!(
                    "{},{},{},{},{},{}\n",
                    r.n,
                    format_float(r.alpha / r.omega),
                    format_float(r.beta / r.omega),
                    format_float(r.omega),
                    format_float(r.max_error),
                    if r.mismatches.is_empty() { "PASS" } else { "FAIL" }
                );
            }
            text.into_bytes()
        }
        Format::Json => json_bytes(&json!({
            "schema_version": SCHEMA_VERSION,
            "tolerance": TABLE_TOL,
            "pass": first_bad.is_none(),
            "max_relative_error": worst,
            "results": rows.iter().map(|r| json!({
                "n": r.n,
                "alpha": r.alpha / r.omega,
                "beta": r.beta / r.omega,
                "omega": r.omega,
                "max_relative_error": r.max_error,
                "mismatches": r.mismatches.iter().map(|(k, fam, a, b, e)| json!({
                    "k": k, "coefficient": fam, "recurrence": a, "table": b, "relative_error": e,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }))?,
    };
    sink.commit("verify-table", &payload)?;
    for r in &rows {
        for (k, family, a, b, e) in &r.mismatches {
            eprintln!(
                "n = {}, k = {k}: {family} recurrence {} vs table {} (relative error {e:.3e})",
                r.n,
                format_float(*a),
                format_float(*b)
            );
        }
    }
    match first_bad {
        None => {
            eprintln!("PASS: max relative error {worst:.3e} <= {TABLE_TOL:e}");
            Ok(())
        }
        Some((n, k)) => Err(CliError::Mismatch(format!(
            "FAIL: recurrence and table disagree, first at (n, k) = ({n}, {k}); max relative error {worst:.3e}"
        ))),
    }
}

fn series_rows(text: &mut String, source: &str, q: &FourierOperatorSeries) {
    for k in q.ks() {
        let c = q.coeff(k);
        for (r, col) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let z = c[(r, col)];
            *text += &format!("{source},{k},{r},{col},{},{}\n", format_float(z.re), format_float(z.im));
        }
    }
}

pub fn q_operator(
    common: &Common,
    sub: &ArgMatches,
    epsilon: f64,
    beta: f64,
    alpha: f64,
    analytic_max: u32,
) -> Result<(), CliError> {
    check_kmax(common)?;
    let settings = Settings::load(common)?;
    let p = point_params(&settings, sub, common, epsilon, beta, alpha)?;
    let sink = Sink::open(&common.output)?;

    let kmax = common.kmax.unwrap_or_else(|| default_truncation(&p));
    let spectrum = quasienergy_spectrum(&p, kmax)?;
    let reps = select_representatives(&spectrum)?;
    let numeric = match solve_parities(&reps, default_check_cutoff(kmax), DEFAULT_SV_TOL) {
        Ok(sol) => Some(sol),
        Err(Error::NoSymmetry { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let analytic = match p.n() {
        Some(n) if n <= analytic_max && p.alpha() > 0.0 => Some(assemble_q(&solve_recurrence(&p)?, p.omega())?),
        _ => None,
    };
    let status = if numeric.is_some() { "detected" } else { "none" };
    if numeric.is_none() {
        eprintln!("note: no time-nonlocal symmetry detected in the sidebands");
    }
    let difference = match (&numeric, &analytic) {
        (Some(sol), Some(q)) => Some(&sol.q_series + &q.scaled((-1.0).into())),
        _ => None,
    };
    let payload = match common.format {
        Format::Csv => {
            let mut text = String::from("source,k,row,col,re,im\n");
            if let Some(sol) = &numeric {
                series_rows(&mut text, "numeric", &sol.q_series);
            }
            if let Some(q) = &analytic {
                series_rows(&mut text, "analytic", q);
            }
            if let Some(d) = &difference {
                series_rows(&mut text, "difference", d);
            }
            text.into_bytes()
        }
        Format::Json => {
            let numeric_json = numeric.as_ref().map(|sol| {
                let mut v = parity_solution_json(sol);
                v["identities"] = serde_json::to_value(check_identities(&sol.q_series, &p, 32)).expect("plain data");
                v
            });
            let analytic_json = analytic.as_ref().map(|q| {
                json!({
                    "n": p.n(),
                    "q": series_json(q),
                    "identities": serde_json::to_value(check_identities(q, &p, 32)).expect("plain data"),
                })
            });
            json_bytes(&json!({
                "schema_version": SCHEMA_VERSION,
                "status": status,
                "params": params_json(&p),
                "numeric": numeric_json,
                "analytic": analytic_json,
                "max_difference": difference.as_ref().map(|d| d.max_abs()),
                "top_coefficient": numeric.as_ref().map(|s| matrix_json(&s.q_series.coeff(s.n_detected as i32))),
            }))?
        }
    };
    sink.commit("q-operator", &payload)
}
