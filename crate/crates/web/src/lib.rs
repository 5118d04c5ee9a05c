//! Browser bindings: expansion report, trace curve and diagonal coefficients.

use heattrace::assembly::eval_expansion;
use heattrace_cli::{run, Command, Format, JobArgs, JobSpec};
use wasm_bindgen::prelude::*;

fn job(command: Command, potential: &str, dim: usize, order: usize) -> Result<JobSpec, String> {
    JobSpec::from_args(
        command,
        JobArgs {
            dim,
            potential: Some(potential.to_owned()),
            order: Some(order),
            format: Format::Json,
            ..JobArgs::default()
        },
    )
    .map_err(|e| e.to_string())
}

/// JSON report of the expansion, same schema as the CLI.
pub fn expand_report(potential: &str, dim: usize, order: usize) -> Result<String, String> {
    let outcome = run(&job(Command::Expand, potential, dim, order)?).map_err(|e| e.to_string())?;
    Ok(outcome.render(Format::Json))
}

/// `[t_0, K(t_0), t_1, K(t_1), ...]` on a log-spaced grid.
pub fn trace_samples(
    potential: &str,
    dim: usize,
    order: usize,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    if !(t_min > 0.0 && t_max > t_min) || points < 2 {
        return Err("need 0 < t_min < t_max and at least two points".into());
    }
    let outcome = run(&job(Command::Expand, potential, dim, order)?).map_err(|e| e.to_string())?;
    let exp = outcome.expansion.expect("expand keeps its expansion");
    let ratio = (t_max / t_min).ln() / (points - 1) as f64;
    let mut out = Vec::with_capacity(2 * points);
    for i in 0..points {
        let t = t_min * (ratio * i as f64).exp();
        out.push(t);
        out.push(eval_expansion(&exp, t).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// JSON list of `A_k(r)` for `k <= depth`.
pub fn diag_report(potential: &str, dim: usize, depth: usize) -> Result<String, String> {
    let outcome = run(&job(Command::Coeff, potential, dim, depth)?).map_err(|e| e.to_string())?;
    serde_json::to_string(&outcome.report.diagonal).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn expand(potential: &str, dim: usize, order: usize) -> Result<String, JsError> {
    expand_report(potential, dim, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn trace_curve(
    potential: &str,
    dim: usize,
    order: usize,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    trace_samples(potential, dim, order, t_min, t_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn diag_coefficients(potential: &str, dim: usize, depth: usize) -> Result<String, JsError> {
    diag_report(potential, dim, depth).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_matches_cli_schema() {
        let json: serde_json::Value = serde_json::from_str(&expand_report("r^2", 3, 8).unwrap()).unwrap();
        assert_eq!(json["leading_power"], "-3");
        assert_eq!(json["terms"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn curve_is_log_spaced() {
        let s = trace_samples("r^2", 3, 8, 0.01, 1.0, 3).unwrap();
        assert_eq!(s.len(), 6);
        assert!((s[2] - 0.1).abs() < 1e-12 && (s[4] - 1.0).abs() < 1e-12);
        assert!(s[1] > s[3] && s[3] > s[5]);
        assert!(trace_samples("r^2", 3, 8, 1.0, 0.5, 3).is_err());
    }

    #[test]
    fn diagonal_list() {
        let json: serde_json::Value = serde_json::from_str(&diag_report("r^4", 3, 4).unwrap()).unwrap();
        assert_eq!(json[2]["polynomial"], "-10/3*r^2");
        assert!(diag_report("r^3", 3, 4).unwrap_err().contains("odd power"));
    }
}
