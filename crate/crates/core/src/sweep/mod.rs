//! Parameter sweeps across the four solver layers, figure reproductions and
//! cross-solver comparison.

mod compare;
mod config;
mod csv;
mod design;

pub use compare::{compare, CompareReport};
pub use config::{parse_config, parse_grid, parse_solvers};
pub use csv::{emit_csv, write_csv};
pub use design::{design, DesignReport};

use std::fmt;
use std::str::FromStr;

use crate::analytic;
use crate::error::{Error, Result};
use crate::fock::{self, OracleConfig};
use crate::gaussian::{self, Mode};
use crate::model::{CircuitParams, ModeParams, SystemSpec};
use crate::semiclassical::{semiclassical_final_occupation, semiclassical_rate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Solver {
    /// Closed-form rate and occupation including the counter-rotating term.
    Analytic,
    /// Closed forms without the counter-rotating term.
    AnalyticRwa,
    /// Drift spectrum and Lyapunov steady state.
    Gaussian,
    /// Truncated Fock-space master equation.
    Oracle,
    /// Classical circuit response.
    Semiclassical,
}

impl Solver {
    pub const ALL: [Solver; 5] =
        [Solver::Analytic, Solver::AnalyticRwa, Solver::Gaussian, Solver::Oracle, Solver::Semiclassical];

    pub fn name(self) -> &'static str {
        match self {
            Solver::Analytic => "analytic",
            Solver::AnalyticRwa => "analytic-rwa",
            Solver::Gaussian => "gaussian",
            Solver::Oracle => "oracle",
            Solver::Semiclassical => "semiclassical",
        }
    }

    /// Suffix used in CSV column names.
    pub fn column(self) -> &'static str {
        match self {
            Solver::AnalyticRwa => "analytic_rwa",
            other => other.name(),
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Solver::ALL
            .into_iter()
            .find(|v| v.name() == s || v.column() == s)
            .ok_or_else(|| Error::config(None, Some("solvers"), format!("unknown solver `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptParameter {
    /// Δ in hertz.
    Delta,
    /// |Δ|/ω_a on the red side, Δ = -r ω_a.
    DetuningRatio,
    G,
    Kappa0,
    Gamma0,
    NA0,
}

impl SweptParameter {
    const ALL: [SweptParameter; 6] = [
        SweptParameter::Delta,
        SweptParameter::DetuningRatio,
        SweptParameter::G,
        SweptParameter::Kappa0,
        SweptParameter::Gamma0,
        SweptParameter::NA0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweptParameter::Delta => "delta",
            SweptParameter::DetuningRatio => "detuning_ratio",
            SweptParameter::G => "g",
            SweptParameter::Kappa0 => "kappa0",
            SweptParameter::Gamma0 => "gamma0",
            SweptParameter::NA0 => "n_a0",
        }
    }

    /// Whether grid values are frequencies (and so rescale with ω_a).
    pub fn is_frequency(self) -> bool {
        matches!(self, SweptParameter::Delta | SweptParameter::G | SweptParameter::Kappa0 | SweptParameter::Gamma0)
    }

    pub fn apply(self, base: &SystemSpec, value: f64) -> SystemSpec {
        let mut spec = *base;
        match self {
            SweptParameter::Delta => spec.delta = value,
            SweptParameter::DetuningRatio => spec.delta = -value * base.omega_a,
            SweptParameter::G => spec.g = value,
            SweptParameter::Kappa0 => spec.kappa0 = value,
            SweptParameter::Gamma0 => spec.gamma0 = value,
            SweptParameter::NA0 => spec.n_a0 = value,
        }
        spec
    }

    pub fn value_of(self, spec: &SystemSpec) -> f64 {
        match self {
            SweptParameter::Delta => spec.delta,
            SweptParameter::DetuningRatio => -spec.delta / spec.omega_a,
            SweptParameter::G => spec.g,
            SweptParameter::Kappa0 => spec.kappa0,
            SweptParameter::Gamma0 => spec.gamma0,
            SweptParameter::NA0 => spec.n_a0,
        }
    }
}

impl FromStr for SweptParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweptParameter::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::config(None, Some("parameter"), format!("unknown swept parameter `{s}`")))
    }
}

/// Circuit-level description the base spec was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitSetup {
    pub circuit: CircuitParams,
    pub mechanics: ModeParams,
    pub drive_frequency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemSpec,
    /// LC frequency in hertz, needed by the semiclassical solver.
    pub lc_frequency: Option<f64>,
    pub setup: Option<CircuitSetup>,
    pub parameter: SweptParameter,
    pub grid: Vec<f64>,
    pub solvers: Vec<Solver>,
    pub oracle: Option<OracleConfig>,
    /// Largest number of oracle rows evaluated at once.
    pub oracle_concurrency: usize,
}

impl SweepSpec {
    /// A single-point sweep at `base`.
    pub fn at(base: SystemSpec, solvers: Vec<Solver>) -> Self {
        SweepSpec {
            base,
            lc_frequency: None,
            setup: None,
            parameter: SweptParameter::Delta,
            grid: vec![base.delta],
            solvers,
            oracle: None,
            oracle_concurrency: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.grid.is_empty() {
            return Err(Error::config(None, Some("grid"), "grid is empty"));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::config(None, Some("grid"), "grid values must be finite"));
        }
        let increasing = self.grid.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.grid.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::config(None, Some("grid"), "grid must be strictly monotone"));
        }
        if self.solvers.is_empty() {
            return Err(Error::config(None, Some("solvers"), "no solvers selected"));
        }
        let mut seen = self.solvers.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.solvers.len() {
            return Err(Error::config(None, Some("solvers"), "solver listed twice"));
        }
        if self.solvers.contains(&Solver::Oracle) {
            match &self.oracle {
                Some(config) => config.validate()?,
                None => {
                    return Err(Error::config(None, Some("solvers"), "oracle selected without an [oracle] section"))
                }
            }
        }
        if self.oracle_concurrency == 0 {
            return Err(Error::config(None, Some("concurrency"), "must be at least 1"));
        }
        if let Some(f_b) = self.lc_frequency {
            if !(f_b > 0.0 && f_b.is_finite()) {
                return Err(Error::config(None, Some("lc_frequency"), "must be positive"));
            }
        }
        Ok(())
    }

    /// Rescale all frequencies so that ω_a = 1.
    pub fn scaled(&self) -> Self {
        let factor = 1.0 / self.base.omega_a;
        let grid = if self.parameter.is_frequency() {
            self.grid.iter().map(|v| v * factor).collect()
        } else {
            self.grid.clone()
        };
        SweepSpec {
            base: self.base.rescaled(factor),
            lc_frequency: self.lc_frequency.map(|f| f * factor),
            grid,
            ..self.clone()
        }
    }

    pub fn point(&self, value: f64) -> SystemSpec {
        self.parameter.apply(&self.base, value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub solver: Solver,
    /// Hertz.
    pub gamma_c: Option<f64>,
    pub n_f: Option<f64>,
    /// Empty when both values are present and nothing needs flagging.
    pub diagnostic: String,
}

impl SolverResult {
    fn failed(solver: Solver, err: &Error) -> Self {
        SolverResult { solver, gamma_c: None, n_f: None, diagnostic: err.to_string() }
    }

    pub fn is_failure(&self) -> bool {
        self.gamma_c.is_none() && self.n_f.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub results: Vec<SolverResult>,
}

impl SweepRow {
    pub fn result(&self, solver: Solver) -> Option<&SolverResult> {
        self.results.iter().find(|r| r.solver == solver)
    }

    pub fn all_failed(&self) -> bool {
        self.results.iter().all(SolverResult::is_failure)
    }
}

fn pair(solver: Solver, rate: Result<f64>, occupation: Result<f64>) -> SolverResult {
    let mut notes = Vec::new();
    let gamma_c = rate.map_err(|e| notes.push(format!("rate: {e}"))).ok();
    let n_f = occupation.map_err(|e| notes.push(format!("occupation: {e}"))).ok();
    SolverResult { solver, gamma_c, n_f, diagnostic: notes.join("; ") }
}

fn run_gaussian(spec: &SystemSpec) -> SolverResult {
    let model = gaussian::build_drift(spec);
    let report = gaussian::stability(&model);
    if !report.hurwitz {
        let e = report.least_stable();
        return SolverResult::failed(Solver::Gaussian, &Error::Unstable { re: e.re, im: e.im });
    }
    let occupation = gaussian::steady_state(&model).and_then(|s| gaussian::occupation(&s, Mode::A));
    pair(Solver::Gaussian, gaussian::spectral_cooling_rate(spec), occupation)
}

fn run_oracle(spec: &SystemSpec, config: &OracleConfig) -> SolverResult {
    let outcome = fock::build_generator(spec, config).and_then(|g| fock::steady_state(&g));
    match outcome {
        Ok(state) => {
            let tails = fock::truncation_check(&state, config.tail_threshold);
            let mut diagnostic = format!("tails {:.2e}/{:.2e}; rate not computed", tails.tails.0, tails.tails.1);
            let n_f = if tails.accepted {
                Some(fock::mode_occupation(&state, Mode::A))
            } else {
                diagnostic.push_str("; truncation tail above threshold");
                None
            };
            SolverResult { solver: Solver::Oracle, gamma_c: None, n_f, diagnostic }
        }
        Err(e) => SolverResult::failed(Solver::Oracle, &e),
    }
}

fn run_semiclassical(spec: &SystemSpec, lc_frequency: Option<f64>) -> SolverResult {
    let (rate, note) = match lc_frequency {
        Some(f_b) => (semiclassical_rate(spec.g, f_b, spec.kappa0, f_b + spec.delta, spec.omega_a), String::new()),
        // For ω_b much larger than every other scale the response reduces
        // to the sideband Lorentzian.
        None => (analytic::rwa_cooling_rate(spec), "lc_frequency unset: large-LC-frequency limit".to_owned()),
    };
    let mut result =
        pair(Solver::Semiclassical, Ok(rate), semiclassical_final_occupation(rate, spec.gamma0, spec.n_a0));
    if !note.is_empty() {
        result.diagnostic = if result.diagnostic.is_empty() { note } else { format!("{note}; {}", result.diagnostic) };
    }
    result
}

/// Evaluate one solver at one point; failures become diagnostics.
pub fn evaluate(solver: Solver, spec: &SystemSpec, sweep: &SweepSpec) -> SolverResult {
    if let Err(e) = spec.validate() {
        return SolverResult::failed(solver, &e);
    }
    match solver {
        Solver::Analytic => pair(solver, Ok(analytic::cooling_rate(spec)), analytic::final_occupation(spec)),
        Solver::AnalyticRwa => pair(solver, Ok(analytic::rwa_cooling_rate(spec)), analytic::rwa_final_occupation(spec)),
        Solver::Gaussian => run_gaussian(spec),
        Solver::Oracle => match &sweep.oracle {
            Some(config) => run_oracle(spec, config),
            None => SolverResult::failed(solver, &Error::config(None, Some("solvers"), "no oracle configuration")),
        },
        Solver::Semiclassical => run_semiclassical(spec, sweep.lc_frequency),
    }
}

fn evaluate_row(spec: &SweepSpec, value: f64) -> SweepRow {
    let point = spec.point(value);
    let results = spec.solvers.iter().map(|&s| evaluate(s, &point, spec)).collect();
    SweepRow { value, results }
}

/// One row per grid point, in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let threads = if spec.solvers.contains(&Solver::Oracle) { spec.oracle_concurrency } else { 0 };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
        Ok(pool.install(|| spec.grid.par_iter().map(|&v| evaluate_row(spec, v)).collect()))
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(spec.grid.iter().map(|&v| evaluate_row(spec, v)).collect())
    }
}

/// Equally spaced points including both ends.
pub fn linear_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            (0..n).map(|i| if i + 1 == n { stop } else { start + (stop - start) * i as f64 / (n - 1) as f64 }).collect()
        }
    }
}

/// Coupling strengths of the thick and thin figure curves, hertz.
pub const FIGURE_COUPLINGS: [f64; 2] = [2e6, 1e6];
/// LC frequency used for the semiclassical curves.
pub const FIGURE_LC_FREQUENCY: f64 = 7.5e9;

fn figure(solvers: Vec<Solver>, grid: Vec<f64>) -> Vec<(f64, SweepSpec)> {
    FIGURE_COUPLINGS
        .iter()
        .map(|&g| {
            let base = SystemSpec { g, ..SystemSpec::benchmark() };
            let spec = SweepSpec {
                parameter: SweptParameter::DetuningRatio,
                grid: grid.clone(),
                lc_frequency: Some(FIGURE_LC_FREQUENCY),
                ..SweepSpec::at(base, solvers.clone())
            };
            (g, spec)
        })
        .collect()
}

/// Default detuning axis of the figures: |Δ|/ω_a from 0.5 to 1.5.
pub fn figure_grid() -> Vec<f64> {
    linear_grid(0.5, 1.5, 201)
}

/// Occupation versus detuning with and without the counter-rotating term.
pub fn fig2_specs(grid: Vec<f64>) -> Vec<(f64, SweepSpec)> {
    figure(vec![Solver::Analytic, Solver::AnalyticRwa], grid)
}

/// Cooling rate versus detuning, quantum and semiclassical.
pub fn fig3_specs(grid: Vec<f64>) -> Vec<(f64, SweepSpec)> {
    figure(vec![Solver::Analytic, Solver::Semiclassical], grid)
}

/// File-name tag of a figure curve, e.g. `g2MHz`.
pub fn coupling_tag(g: f64) -> String {
    format!("g{}MHz", g / 1e6)
}

#[cfg(test)]
mod tests;
