//! Text and JSON forms of trajectories, spectra and reports.
//!
//! Exact amounts always appear as `p/q` strings, in CSV and JSON alike, so
//! both formats carry identical values. Rates and deviations are decimals
//! with 12 significant digits.

use serde_json::{json, Value};

use crate::chain::{self, AsymptoticReport, Classification, ContractionLog, ConvergenceCheck, Trajectory};
use crate::error::{Error, Result};
use crate::operator::KashaState;
use crate::rational::{self, Rational};
use crate::topology::Graph;

fn rational_strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(rational::format_rational).collect()
}

pub fn state_json(state: &KashaState) -> Value {
    json!(rational_strings(state.amounts()))
}

fn decimal(value: f64) -> Value {
    json!(rational::round12(value))
}

/// CSV with header `t,node0,...,nodeK,range`, one row per time step.
pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let n = trajectory.states()[0].len();
    let mut out = String::from("t");
    for v in 0..n {
        out.push_str(&format!(",node{v}"));
    }
    out.push_str(",range\n");
    for (t, (state, range)) in trajectory.states().iter().zip(trajectory.ranges()).enumerate() {
        let mut row = vec![t.to_string()];
        row.extend(rational_strings(state.amounts()));
        row.push(rational::format_rational(range));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `{"steps": [{"t": 0, "amounts": [...], "range": "..."}, ...]}`
pub fn trajectory_json(trajectory: &Trajectory) -> Value {
    let steps: Vec<Value> = trajectory
        .states()
        .iter()
        .zip(trajectory.ranges())
        .enumerate()
        .map(|(t, (state, range))| {
            json!({
                "t": t,
                "amounts": state_json(state),
                "range": rational::format_rational(range),
            })
        })
        .collect();
    json!({ "steps": steps })
}

pub fn report_json(report: &AsymptoticReport, initial_total: &Rational) -> Value {
    json!({
        "classification": report.classification.as_str(),
        "initial_total": rational::format_rational(initial_total),
        "limit_even": state_json(&report.limit_even),
        "limit_odd": state_json(&report.limit_odd),
        "convergence_rate": decimal(report.convergence_rate),
    })
}

/// The asymptotic report for `init` on `graph`. Disconnected graphs yield
/// a `Reducible` document whose limits and rate are `null`.
pub fn analysis_json(graph: &Graph, init: &KashaState) -> Result<Value> {
    match chain::predict_limit(graph, init) {
        Ok(report) => Ok(report_json(&report, &init.total())),
        Err(Error::Disconnected) => Ok(json!({
            "classification": Classification::Reducible.as_str(),
            "initial_total": rational::format_rational(&init.total()),
            "limit_even": null,
            "limit_odd": null,
            "convergence_rate": null,
        })),
        Err(e) => Err(e),
    }
}

pub fn convergence_json(check: &ConvergenceCheck) -> Value {
    let ratios: Vec<Value> = check
        .contraction_ratios
        .iter()
        .map(|r| r.as_ref().map_or(Value::Null, |q| json!(rational::format_rational(q))))
        .collect();
    json!({
        "classification": check.classification.as_str(),
        "steps": check.steps,
        "tolerance": check.tolerance,
        "deviation": check.deviation.as_ref().map(rational::to_f64).map(decimal),
        "deviation_exact": check.deviation.as_ref().map(rational::format_rational),
        "passed": check.passed,
        "contraction_ratios": ratios,
    })
}

pub fn contraction_json(log: &ContractionLog) -> Value {
    json!({
        "passed": true,
        "ranges": rational_strings(&log.ranges),
    })
}
