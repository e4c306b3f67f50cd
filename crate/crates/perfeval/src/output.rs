//! Row serialization: the fixed CSV schema and its JSON mirror.
//!
//! Schema v1 columns, in order:
//! `method, semantics, S, L, lambda, mu, xi, xi_h, eta, eta_h, mql, thrp,
//! mrt, availability, p_block, iterations, converged, residual, ci_mql,
//! ci_thrp, ci_mrt, wall_ms`.
//!
//! Floating values carry 9 significant digits; fields that do not apply
//! (confidence intervals on analytical rows, iteration counts on DES rows,
//! an undefined MRT) stay empty in CSV and null in JSON. Identical runs
//! produce byte-identical files except for the `wall_ms` column.

use performability::experiment::{CompareReport, SweepRow};
use serde_json::{json, Value};
use std::io::Write;

pub const CSV_HEADER: [&str; 22] = [
    "method",
    "semantics",
    "S",
    "L",
    "lambda",
    "mu",
    "xi",
    "xi_h",
    "eta",
    "eta_h",
    "mql",
    "thrp",
    "mrt",
    "availability",
    "p_block",
    "iterations",
    "converged",
    "residual",
    "ci_mql",
    "ci_thrp",
    "ci_mrt",
    "wall_ms",
];

/// 9 significant digits, exponent notation.
pub fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

fn opt_sig9(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}

pub fn row_record(row: &SweepRow) -> Vec<String> {
    let p = &row.params;
    let m = row.metrics;
    vec![
        row.method.as_str().to_string(),
        p.semantics.as_str().to_string(),
        p.s.to_string(),
        p.l.to_string(),
        sig9(p.lambda),
        sig9(p.mu),
        sig9(p.xi),
        sig9(p.xi_h),
        sig9(p.eta),
        sig9(p.eta_h),
        opt_sig9(m.map(|m| m.mql)),
        opt_sig9(m.map(|m| m.thrp)),
        opt_sig9(m.and_then(|m| m.mrt)),
        opt_sig9(m.map(|m| m.availability)),
        opt_sig9(m.map(|m| m.p_block)),
        row.iterations.map(|i| i.to_string()).unwrap_or_default(),
        row.converged.map(|c| c.to_string()).unwrap_or_default(),
        opt_sig9(row.residual),
        opt_sig9(row.ci.map(|ci| ci.mql)),
        opt_sig9(row.ci.map(|ci| ci.thrp)),
        opt_sig9(row.ci.and_then(|ci| ci.mrt)),
        row.wall.as_millis().to_string(),
    ]
}

pub fn write_rows_csv<W: Write>(rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row_record(row))?;
    }
    w.flush()
}

fn row_json(row: &SweepRow) -> Value {
    let p = &row.params;
    let m = row.metrics;
    json!({
        "method": row.method.as_str(),
        "semantics": p.semantics.as_str(),
        "S": p.s,
        "L": p.l,
        "lambda": p.lambda,
        "mu": p.mu,
        "xi": p.xi,
        "xi_h": p.xi_h,
        "eta": p.eta,
        "eta_h": p.eta_h,
        "mql": m.map(|m| m.mql),
        "thrp": m.map(|m| m.thrp),
        "mrt": m.and_then(|m| m.mrt),
        "availability": m.map(|m| m.availability),
        "p_block": m.map(|m| m.p_block),
        "iterations": row.iterations,
        "converged": row.converged,
        "residual": row.residual,
        "ci_mql": row.ci.map(|ci| ci.mql),
        "ci_thrp": row.ci.map(|ci| ci.thrp),
        "ci_mrt": row.ci.and_then(|ci| ci.mrt),
        "error": row.error,
        "wall_ms": row.wall.as_millis() as u64,
    })
}

pub fn write_rows_json<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    let values: Vec<Value> = rows.iter().map(row_json).collect();
    serde_json::to_writer_pretty(&mut out, &values)?;
    writeln!(out)
}

pub fn write_compare_csv<W: Write>(report: &CompareReport, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "metric",
        "method_a",
        "method_b",
        "value_a",
        "value_b",
        "rel_discrepancy",
        "threshold",
        "pass",
    ])?;
    for d in &report.discrepancies {
        w.write_record([
            d.metric.to_string(),
            d.a.as_str().to_string(),
            d.b.as_str().to_string(),
            sig9(d.a_value),
            sig9(d.b_value),
            sig9(d.rel),
            sig9(report.threshold),
            d.pass.to_string(),
        ])?;
    }
    w.flush()
}

pub fn write_compare_json<W: Write>(report: &CompareReport, mut out: W) -> std::io::Result<()> {
    let values: Vec<Value> = report
        .discrepancies
        .iter()
        .map(|d| {
            json!({
                "metric": d.metric,
                "method_a": d.a.as_str(),
                "method_b": d.b.as_str(),
                "value_a": d.a_value,
                "value_b": d.b_value,
                "rel_discrepancy": d.rel,
                "threshold": report.threshold,
                "pass": d.pass,
            })
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &values)?;
    writeln!(out)
}
