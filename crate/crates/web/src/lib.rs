//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON string. The `*_json` functions hold the logic
//! and are plain Rust so they can be tested natively.

use lincool::sweep::{linear_grid, parse_config, run_sweep, Solver, SweepRow, SweepSpec, SweptParameter};
use lincool::{sweep, SystemSpec};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Upper bound on curve points, to keep the page responsive.
pub const MAX_POINTS: usize = 2001;

fn detuning_sweep(
    g: f64,
    kappa0: f64,
    lc_frequency: Option<f64>,
    start: f64,
    stop: f64,
    n: usize,
    solvers: Vec<Solver>,
) -> Result<Vec<SweepRow>, String> {
    if !(2..=MAX_POINTS).contains(&n) {
        return Err(format!("number of points must be between 2 and {MAX_POINTS}"));
    }
    let base = SystemSpec { g, kappa0, ..SystemSpec::benchmark() };
    let spec = SweepSpec {
        parameter: SweptParameter::DetuningRatio,
        grid: linear_grid(start, stop, n),
        lc_frequency,
        ..SweepSpec::at(base, solvers)
    };
    run_sweep(&spec).map_err(|e| e.to_string())
}

/// Column of one solver; failed points become `null`.
fn column(rows: &[SweepRow], solver: Solver, occupation: bool) -> Value {
    rows.iter()
        .map(|r| {
            let result = r.result(solver);
            let v = result.and_then(|x| if occupation { x.n_f } else { x.gamma_c });
            v.filter(|x| x.is_finite()).map_or(Value::Null, Value::from)
        })
        .collect()
}

fn ratios(rows: &[SweepRow]) -> Value {
    rows.iter().map(|r| r.value).collect()
}

/// Final occupation against |Delta|/omega_a for the full, rotating-wave and
/// Gaussian models. Frequencies in Hz.
pub fn occupation_curve_json(g: f64, kappa0: f64, start: f64, stop: f64, n: usize) -> Result<Value, String> {
    let solvers = vec![Solver::Analytic, Solver::AnalyticRwa, Solver::Gaussian];
    let rows = detuning_sweep(g, kappa0, None, start, stop, n, solvers)?;
    Ok(json!({
        "ratio": ratios(&rows),
        "analytic": column(&rows, Solver::Analytic, true),
        "analytic_rwa": column(&rows, Solver::AnalyticRwa, true),
        "gaussian": column(&rows, Solver::Gaussian, true),
    }))
}

/// Cooling rate against |Delta|/omega_a, quantum and semiclassical.
pub fn rate_curve_json(
    g: f64,
    kappa0: f64,
    lc_frequency: f64,
    start: f64,
    stop: f64,
    n: usize,
) -> Result<Value, String> {
    let solvers = vec![Solver::Analytic, Solver::Semiclassical];
    let rows = detuning_sweep(g, kappa0, Some(lc_frequency), start, stop, n, solvers)?;
    Ok(json!({
        "ratio": ratios(&rows),
        "analytic": column(&rows, Solver::Analytic, false),
        "semiclassical": column(&rows, Solver::Semiclassical, false),
    }))
}

/// Derived parameters of a circuit given in the configuration format.
pub fn design_json(config: &str) -> Result<Value, String> {
    let spec = parse_config(config).map_err(|e| e.to_string())?;
    let setup = spec.setup.ok_or("a [circuit] section is required")?;
    let report = sweep::design(&setup).map_err(|e| e.to_string())?;
    let s = report.spec;
    Ok(json!({
        "lc_frequency": report.lc_frequency,
        "kappa0": report.kappa0,
        "g_l": report.g_l,
        "g_r": report.g_r,
        "coupling_ratio": report.coupling_ratio,
        "effective_temperature": report.effective_temperature,
        "mass": report.mass,
        "system": {
            "omega_a": s.omega_a, "delta": s.delta, "g": s.g, "gamma0": s.gamma0,
            "kappa0": s.kappa0, "n_a0": s.n_a0, "n_b0": s.n_b0,
        },
        "text": report.to_string(),
    }))
}

fn export(result: Result<Value, String>) -> Result<String, JsError> {
    result.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn occupation_curve(g: f64, kappa0: f64, start: f64, stop: f64, n: usize) -> Result<String, JsError> {
    export(occupation_curve_json(g, kappa0, start, stop, n))
}

#[wasm_bindgen]
pub fn rate_curve(g: f64, kappa0: f64, lc_frequency: f64, start: f64, stop: f64, n: usize) -> Result<String, JsError> {
    export(rate_curve_json(g, kappa0, lc_frequency, start, stop, n))
}

#[wasm_bindgen]
pub fn design_circuit(config: &str) -> Result<String, JsError> {
    export(design_json(config))
}
