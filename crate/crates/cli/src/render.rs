//! Text renderings of reports. Every data row is a pure function of the
//! computed values, so identical runs produce identical bytes; timings only
//! appear in the JSON `metadata` object.

use std::fmt::Write as _;

use serde_json::{json, Value};
use urysohn::extrapolation::{LevelReport, PointRow};
use urysohn::poly_basis::{bernoulli, AsymptoticCoefficients};
use urysohn::ConvergenceReport;

pub const CSV_HEADER: &str = "t,eps_S,order_S,eps_EX,order_EX";

pub const SAMPLE_POINTS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Nine significant digits.
pub fn sci(v: f64) -> String {
    format!("{v:.8e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

pub fn level_csv(level: &LevelReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for PointRow {
        t,
        eps_s,
        order_s,
        eps_ex,
        order_ex,
    } in &level.rows
    {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            sci(*t),
            sci(*eps_s),
            opt(*order_s),
            opt(*eps_ex),
            opt(*order_ex)
        );
    }
    out
}

fn md_opt(v: Option<f64>, f: impl Fn(f64) -> String) -> String {
    v.map(f).unwrap_or_else(|| "-".to_string())
}

pub fn level_markdown(report: &ConvergenceReport, level: &LevelReport) -> String {
    let n = level.stats.n;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "problem `{}`, r = {}, n = {}, p = {}, m = {}, rho = {}\n",
        report.problem, report.r, n, level.stats.p, level.stats.m, level.stats.rho
    );
    let _ = writeln!(out, "| t_i | eps_S (n={n}) | delta_S | eps_EX (n={n}) | delta_EX |");
    out.push_str("|---|---|---|---|---|\n");
    for row in &level.rows {
        let _ = writeln!(
            out,
            "| {} | {:.2e} | {} | {} | {} |",
            row.t,
            row.eps_s,
            md_opt(row.order_s, |d| format!("{d:.2}")),
            md_opt(row.eps_ex, |e| format!("{e:.2e}")),
            md_opt(row.order_ex, |d| format!("{d:.2}")),
        );
    }
    out
}

/// Report without timings, plus a `metadata` object carrying them.
pub fn report_json(report: &ConvergenceReport, execution: &str) -> String {
    let mut body = serde_json::to_value(report).expect("report serialises");
    let mut clocks = Vec::new();
    if let Some(levels) = body.get_mut("levels").and_then(Value::as_array_mut) {
        for level in levels {
            if let Some(stats) = level.get_mut("stats").and_then(Value::as_object_mut) {
                let n = stats.get("n").cloned().unwrap_or(Value::Null);
                let secs = stats.remove("wall_clock_seconds").unwrap_or(Value::Null);
                clocks.push(json!({ "n": n, "wall_clock_seconds": secs }));
            }
        }
    }
    let doc = json!({
        "report": body,
        "metadata": {
            "version": env!("CARGO_PKG_VERSION"),
            "execution": execution,
            "solves": clocks,
            "total_wall_clock_seconds": report.total_wall_clock_seconds(),
        }
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json serialises");
    s.push('\n');
    s
}

pub fn coefficients(c: &AsymptoticCoefficients) -> String {
    let r = c.r;
    let mut out = String::new();
    let _ = writeln!(out, "r = {r}");
    for (i, b) in c.bbar.iter().enumerate() {
        let _ = writeln!(out, "bbar[{},{}] = {b:.6e}", 2 * r, i + 1);
    }
    let _ = writeln!(out, "J2_integral = {:.6e}", c.j_square_integral);
    for k in 1..=2 * r + 1 {
        for tau in SAMPLE_POINTS {
            let j = c.j(k, tau).expect("k and tau in range");
            let _ = writeln!(out, "J_{k}({tau}) = {j:.6e}");
        }
    }
    for k in 0..=2 * r {
        for s in SAMPLE_POINTS {
            let b = bernoulli(k, s).expect("degree in range");
            let _ = writeln!(out, "B_{k}({s}) = {b:.6e}");
        }
    }
    out
}
