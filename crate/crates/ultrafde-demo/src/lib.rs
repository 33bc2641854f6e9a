//! Browser demo: three interactive views over the solver, exported through
//! wasm-bindgen and consumed by the static page in `www/`.
//!
//! Every export returns a JSON string; the page parses it and draws on a
//! canvas. Errors become JS exceptions carrying the solver diagnostic.

use serde::Serialize;
use ultrafde::problem::{built_in_example, ProblemFile};
use ultrafde::solver::{
    self, convergence_study, max_abs_error, NodeScheme, SolverConfig,
};
use ultrafde::Basis;
use wasm_bindgen::prelude::*;

fn scheme_from_flag(gauss: bool) -> NodeScheme {
    if gauss {
        NodeScheme::Gauss
    } else {
        NodeScheme::Equispaced
    }
}

fn load_example(id: u32, q: f64, q1: f64) -> Result<ProblemFile, JsValue> {
    let (q, q1) = (
        (id == 1).then_some(q),
        (id == 1).then_some(q1),
    );
    built_in_example(id, q, q1).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[derive(Serialize)]
struct SolveOutput {
    xs: Vec<f64>,
    u: Vec<f64>,
    exact: Option<Vec<f64>>,
    abs_error: Option<Vec<f64>>,
    max_abs_error: Option<f64>,
    residual_norm: f64,
    newton_iterations: usize,
    ill_conditioned: bool,
}

/// Solve a built-in problem and sample the solution (and error profile when
/// an exact solution exists) on a uniform grid.
#[wasm_bindgen]
pub fn solve_example(
    id: u32,
    lambda: f64,
    degree: usize,
    q: f64,
    q1: f64,
    gauss: bool,
    samples: usize,
) -> Result<String, JsValue> {
    let pf = load_example(id, q, q1)?;
    let config = SolverConfig::new(lambda, degree).with_scheme(scheme_from_flag(gauss));
    let sol = solver::solve_with_config(&pf.problem, &config)
        .map_err(|e| JsValue::from_str(&e.to_string()))?;
    let (a, b) = pf.problem.interval;
    let n = samples.clamp(2, 5000);
    let xs: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let u = sol
        .evaluate(&xs)
        .map_err(|e| JsValue::from_str(&e.to_string()))?;
    let (exact, abs_error, worst) = match &pf.problem.exact_solution {
        Some(ex) => {
            let vals: Result<Vec<f64>, _> = xs.iter().map(|&x| ex.eval_in_x(x)).collect();
            let vals = vals.map_err(|e| JsValue::from_str(&e.to_string()))?;
            let errs: Vec<f64> = u.iter().zip(&vals).map(|(a, b)| (a - b).abs()).collect();
            let worst = max_abs_error(&sol, ex, 1000)
                .map_err(|e| JsValue::from_str(&e.to_string()))?;
            (Some(vals), Some(errs), Some(worst))
        }
        None => (None, None, None),
    };
    let out = SolveOutput {
        xs,
        u,
        exact,
        abs_error,
        max_abs_error: worst,
        residual_norm: sol.residual_norm,
        newton_iterations: sol.diagnostics.newton_iterations(),
        ill_conditioned: sol.diagnostics.ill_conditioned,
    };
    serde_json::to_string(&out).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[derive(Serialize)]
struct ConvergenceOutput {
    rows: Vec<ConvergenceRowOut>,
}

#[derive(Serialize)]
struct ConvergenceRowOut {
    n: usize,
    lambda: f64,
    max_abs_error: Option<f64>,
    residual: Option<f64>,
    newton_iters: usize,
    failure: Option<String>,
}

/// Error-vs-degree data for a built-in problem at one lambda.
#[wasm_bindgen]
pub fn convergence_table(
    id: u32,
    lambda: f64,
    n_from: usize,
    n_to: usize,
    n_step: usize,
    q: f64,
    q1: f64,
    gauss: bool,
) -> Result<String, JsValue> {
    let pf = load_example(id, q, q1)?;
    let step = n_step.max(1);
    let degrees: Vec<usize> = (n_from..=n_to).step_by(step).collect();
    let rows = convergence_study(&pf.problem, lambda, &degrees, scheme_from_flag(gauss));
    let out = ConvergenceOutput {
        rows: rows
            .into_iter()
            .map(|r| ConvergenceRowOut {
                n: r.n,
                lambda: r.lambda,
                max_abs_error: r.max_abs_error,
                residual: r.residual,
                newton_iters: r.newton_iters,
                failure: r.failure,
            })
            .collect(),
    };
    serde_json::to_string(&out).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[derive(Serialize)]
struct BasisOutput {
    xs: Vec<f64>,
    curves: Vec<Vec<f64>>,
}

/// Sampled basis polynomials C_0..C_n on [0, 1], normalized to unit sup-norm
/// so different degrees share one plot scale.
#[wasm_bindgen]
pub fn basis_curves(lambda: f64, degree: usize, normalize: bool) -> Result<String, JsValue> {
    let n = degree.min(16);
    let basis =
        Basis::new(lambda, n, (0.0, 1.0)).map_err(|e| JsValue::from_str(&e.to_string()))?;
    let samples = 400;
    let xs: Vec<f64> = (0..=samples).map(|i| i as f64 / samples as f64).collect();
    let mut curves = vec![Vec::with_capacity(xs.len()); n + 1];
    for &x in &xs {
        let vals = basis.eval_all(x);
        for (j, v) in vals.iter().enumerate() {
            curves[j].push(*v);
        }
    }
    if normalize {
        for curve in &mut curves {
            let peak = curve.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if peak > 0.0 {
                for v in curve.iter_mut() {
                    *v /= peak;
                }
            }
        }
    }
    serde_json::to_string(&BasisOutput { xs, curves })
        .map_err(|e| JsValue::from_str(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_output_is_valid_json() {
        let json = solve_example(3, 0.5, 12, 0.0, 0.0, true, 100).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["xs"].as_array().unwrap().len(), 101);
        assert!(v["max_abs_error"].as_f64().unwrap() < 1e-6);
    }

    #[test]
    fn convergence_output_rows() {
        let json = convergence_table(2, -0.49, 6, 12, 2, 0.0, 0.0, false).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn basis_curves_shape() {
        let json = basis_curves(-0.49, 6, true).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["curves"].as_array().unwrap().len(), 7);
    }
}
