use std::fmt;

use super::{evaluate, Solver, SweepSpec};
use crate::error::Result;
use crate::fock::{self, OracleConfig, TailReport};
use crate::gaussian::Mode;
use crate::model::SystemSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub spec: SystemSpec,
    pub oracle: OracleConfig,
    /// `(label, n_a^f, diagnostic)` for every method.
    pub occupations: Vec<(&'static str, Option<f64>, String)>,
    pub tails_full: TailReport,
    pub tails_rwa: TailReport,
    /// Oracle occupation with minus without the counter-rotating term.
    pub backaction_gap: f64,
    /// κ0²/16ω_a².
    pub expected_floor: f64,
}

impl CompareReport {
    pub fn occupation(&self, label: &str) -> Option<f64> {
        self.occupations.iter().find(|(l, _, _)| *l == label).and_then(|e| e.1)
    }

    /// `|x/y - 1|` for every pair with both values present.
    pub fn relative_differences(&self) -> Vec<(&'static str, &'static str, f64)> {
        let mut out = Vec::new();
        for (i, (la, a, _)) in self.occupations.iter().enumerate() {
            for (lb, b, _) in &self.occupations[i + 1..] {
                if let (Some(a), Some(b)) = (a, b) {
                    out.push((*la, *lb, (a / b - 1.0).abs()));
                }
            }
        }
        out
    }

    /// Relative deviation of the backaction gap from κ0²/16ω_a².
    pub fn gap_deviation(&self) -> f64 {
        (self.backaction_gap / self.expected_floor - 1.0).abs()
    }
}

/// Every solver at one point, including the oracle with and without the
/// counter-rotating term.
pub fn compare(spec: &SystemSpec, oracle: &OracleConfig, lc_frequency: Option<f64>) -> Result<CompareReport> {
    spec.validate()?;
    let full_config = OracleConfig { include_counter_rotating: true, ..*oracle };
    let solve = |config: &OracleConfig| -> Result<(f64, TailReport)> {
        let generator = fock::build_generator(spec, config)?;
        let state = fock::steady_state(&generator)?;
        Ok((fock::mode_occupation(&state, Mode::A), fock::truncation_check(&state, config.tail_threshold)))
    };
    let (full, tails_full) = solve(&full_config)?;
    let (rwa, tails_rwa) = solve(&full_config.rotating_wave())?;

    let sweep = SweepSpec { lc_frequency, ..SweepSpec::at(*spec, Vec::new()) };
    let closed = |solver: Solver| {
        let r = evaluate(solver, spec, &sweep);
        (solver.name(), r.n_f, r.diagnostic)
    };
    let tail_note = |t: &TailReport| {
        let mut s = format!("tails {:.2e}/{:.2e}", t.tails.0, t.tails.1);
        if !t.accepted {
            s.push_str(" above threshold");
        }
        s
    };
    let occupations = vec![
        closed(Solver::Analytic),
        closed(Solver::AnalyticRwa),
        closed(Solver::Gaussian),
        ("oracle", Some(full), tail_note(&tails_full)),
        ("oracle-rwa", Some(rwa), tail_note(&tails_rwa)),
        closed(Solver::Semiclassical),
    ];
    Ok(CompareReport {
        spec: *spec,
        oracle: full_config,
        occupations,
        tails_full,
        tails_rwa,
        backaction_gap: full - rwa,
        expected_floor: spec.kappa0.powi(2) / (16.0 * spec.omega_a.powi(2)),
    })
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.spec;
        writeln!(
            f,
            "spec: omega_a={:e} delta={:e} g={:e} gamma0={:e} kappa0={:e} n_a0={:e} n_b0={:e}",
            s.omega_a, s.delta, s.g, s.gamma0, s.kappa0, s.n_a0, s.n_b0
        )?;
        writeln!(f, "oracle dims {:?}, tail threshold {:e}", self.oracle.dims, self.oracle.tail_threshold)?;
        writeln!(f)?;
        writeln!(f, "{:<14} {:>24}  diagnostic", "method", "n_a^f")?;
        for (label, value, diag) in &self.occupations {
            let v = value.map(|x| format!("{x:e}")).unwrap_or_else(|| "-".into());
            writeln!(f, "{label:<14} {v:>24}  {diag}")?;
        }
        writeln!(f)?;
        writeln!(f, "relative differences")?;
        for (a, b, d) in self.relative_differences() {
            writeln!(f, "  {a:<14} vs {b:<14} {d:.4e}")?;
        }
        writeln!(f)?;
        write!(
            f,
            "backaction gap (oracle - oracle-rwa) {:e}, kappa0^2/16 omega_a^2 = {:e}, deviation {:.2}%",
            self.backaction_gap,
            self.expected_floor,
            100.0 * self.gap_deviation()
        )
    }
}
