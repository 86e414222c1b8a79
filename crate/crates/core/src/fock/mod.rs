//! Truncated two-mode Fock-space master equation.
//!
//! Density matrices are flattened row-major, `ρ_ij → i·D + j`, with the
//! product basis `|m, n⟩ → m·N_b + n`. The generator is stored in hertz; time
//! evolution multiplies by 2π.
//!
//! Stationary states are found by pinning the vacuum population and solving
//! the remaining linear system with GMRES. The preconditioner exploits the
//! excitation structure: the number-conserving part of the generator never
//! changes `k = N(row) − N(col)`, and the counter-rotating coupling shifts `k`
//! by ±2 only. The `k = 0` block is factored exactly (it is banded when
//! ordered by total excitation number); other entries get a diagonal scaling.

mod banded;
mod gmres;
mod sparse;

pub use banded::{BandedLu, SingularPivot};
pub use gmres::{gmres, GmresReport};
pub use sparse::CsrMatrix;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::constants::angular;
use crate::error::{Error, Result};
use crate::fit::{fit_decay, FitOptions};
use crate::gaussian::{CoolingFit, Mode};
use crate::model::SystemSpec;
use crate::ode::{integrate, IntegrationFailure, StepControl};

const TRACE_TOLERANCE: f64 = 1e-10;
const HERMITICITY_TOLERANCE: f64 = 1e-10;
/// Smallest admissible density-matrix eigenvalue.
pub const POSITIVITY_TOLERANCE: f64 = -1e-8;
/// Allowed trace drift along a trajectory.
pub const TRACE_DRIFT_TOLERANCE: f64 = 1e-8;
/// Stationary residual bound, relative to the largest generator entry.
pub const STEADY_RESIDUAL_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Fock levels kept for the mechanical and LC modes.
    pub dims: (usize, usize),
    pub include_counter_rotating: bool,
    /// Largest accepted population in the top Fock level of either mode.
    pub tail_threshold: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { dims: (25, 8), include_counter_rotating: true, tail_threshold: 1e-6 }
    }
}

impl OracleConfig {
    pub fn new(dims: (usize, usize)) -> Self {
        OracleConfig { dims, ..Default::default() }
    }

    pub fn rotating_wave(self) -> Self {
        OracleConfig { include_counter_rotating: false, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.0 < 2 || self.dims.1 < 2 {
            return Err(Error::param("dims", "each mode needs at least two levels"));
        }
        if !(self.tail_threshold > 0.0 && self.tail_threshold < 1.0) {
            return Err(Error::param("tail_threshold", "must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    pub dims: (usize, usize),
    pub matrix: DMatrix<Complex64>,
}

impl DensityState {
    fn dim(dims: (usize, usize)) -> usize {
        dims.0 * dims.1
    }

    pub fn vacuum(dims: (usize, usize)) -> Self {
        Self::fock(dims, 0, 0).expect("vacuum always fits")
    }

    pub fn fock(dims: (usize, usize), m: usize, n: usize) -> Result<Self> {
        if m >= dims.0 || n >= dims.1 {
            return Err(Error::Truncation(format!("|{m}, {n}⟩ does not fit in dims {dims:?}")));
        }
        let d = Self::dim(dims);
        let mut matrix = DMatrix::zeros(d, d);
        let h = m * dims.1 + n;
        matrix[(h, h)] = ONE;
        Ok(DensityState { dims, matrix })
    }

    /// Product of truncated thermal states, renormalized.
    pub fn thermal(dims: (usize, usize), n_a: f64, n_b: f64) -> Result<Self> {
        let pa = geometric(dims.0, n_a)?;
        let pb = geometric(dims.1, n_b)?;
        let (sa, sb): (f64, f64) = (pa.iter().sum(), pb.iter().sum());
        let d = Self::dim(dims);
        let mut matrix = DMatrix::zeros(d, d);
        for (m, p) in pa.iter().enumerate() {
            for (n, q) in pb.iter().enumerate() {
                let h = m * dims.1 + n;
                matrix[(h, h)] = Complex64::new(p * q / (sa * sb), 0.0);
            }
        }
        Ok(DensityState { dims, matrix })
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_part(&self.matrix).symmetric_eigenvalues().min()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Unit trace, Hermitian, and positive within tolerance.
    pub fn check_physical(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - ONE).norm() > TRACE_TOLERANCE {
            return Err(Error::Unphysical(format!("trace {tr} differs from 1")));
        }
        let herm = self.hermiticity_error();
        if herm > HERMITICITY_TOLERANCE {
            return Err(Error::Unphysical(format!("hermiticity error {herm:.3e}")));
        }
        let min = self.min_eigenvalue();
        if min < POSITIVITY_TOLERANCE {
            return Err(Error::Unphysical(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// Level populations of one mode.
    pub fn marginal(&self, mode: Mode) -> Vec<f64> {
        let (na, nb) = self.dims;
        let mut out = vec![0.0; if mode == Mode::A { na } else { nb }];
        for m in 0..na {
            for n in 0..nb {
                let h = m * nb + n;
                out[if mode == Mode::A { m } else { n }] += self.matrix[(h, h)].re;
            }
        }
        out
    }

    fn to_vector(&self) -> Vec<Complex64> {
        let d = self.matrix.nrows();
        let mut v = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                v.push(self.matrix[(i, j)]);
            }
        }
        v
    }

    fn from_vector(dims: (usize, usize), v: &[Complex64]) -> Self {
        let d = Self::dim(dims);
        DensityState { dims, matrix: DMatrix::from_fn(d, d, |i, j| v[i * d + j]) }
    }
}

fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

fn geometric(levels: usize, n: f64) -> Result<Vec<f64>> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::param("occupation", "must be finite and non-negative"));
    }
    let ratio = n / (n + 1.0);
    Ok((0..levels).map(|k| ratio.powi(k as i32) / (n + 1.0)).collect())
}

/// `Tr(ρ c†c)` for the chosen mode.
pub fn mode_occupation(state: &DensityState, mode: Mode) -> f64 {
    state.marginal(mode).iter().enumerate().map(|(k, p)| k as f64 * p).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport {
    /// Population of the highest kept level of each mode.
    pub tails: (f64, f64),
    pub threshold: f64,
    pub accepted: bool,
}

pub fn truncation_check(state: &DensityState, threshold: f64) -> TailReport {
    let ta = *state.marginal(Mode::A).last().unwrap_or(&0.0);
    let tb = *state.marginal(Mode::B).last().unwrap_or(&0.0);
    TailReport { tails: (ta, tb), threshold, accepted: ta <= threshold && tb <= threshold }
}

/// Sparse Liouvillian together with the data it was built from.
#[derive(Debug, Clone)]
pub struct Generator {
    pub spec: SystemSpec,
    pub config: OracleConfig,
    /// Hertz.
    pub matrix: CsrMatrix,
}

impl Generator {
    pub fn dims(&self) -> (usize, usize) {
        self.config.dims
    }

    fn hilbert_dim(&self) -> usize {
        self.config.dims.0 * self.config.dims.1
    }

    fn excitations(&self, h: usize) -> usize {
        h / self.config.dims.1 + h % self.config.dims.1
    }

    /// `L(ρ)` as a matrix, in hertz.
    pub fn apply(&self, state: &DensityState) -> DensityState {
        let x = state.to_vector();
        let mut y = vec![ZERO; x.len()];
        self.matrix.mul_vec_into(&x, &mut y, 1.0);
        DensityState::from_vector(state.dims, &y)
    }

    /// Trace norm of `L(ρ)` relative to the largest generator entry.
    pub fn relative_residual(&self, state: &DensityState) -> f64 {
        let l = self.apply(state);
        let trace_norm: f64 = hermitian_part(&l.matrix).symmetric_eigenvalues().iter().map(|e| e.abs()).sum();
        trace_norm / self.matrix.max_abs()
    }
}

type Triplets = Vec<(usize, usize, Complex64)>;

/// Sparse Hilbert-space operator as (row, col, value).
fn lowering(dims: (usize, usize), mode: Mode) -> Triplets {
    let (na, nb) = dims;
    let mut out = Vec::new();
    for m in 0..na {
        for n in 0..nb {
            let h = m * nb + n;
            match mode {
                Mode::A if m > 0 => out.push((h - nb, h, Complex64::new((m as f64).sqrt(), 0.0))),
                Mode::B if n > 0 => out.push((h - 1, h, Complex64::new((n as f64).sqrt(), 0.0))),
                _ => {}
            }
        }
    }
    out
}

fn adjoint(op: &Triplets) -> Triplets {
    op.iter().map(|&(r, c, v)| (c, r, v.conj())).collect()
}

fn product(x: &Triplets, y: &Triplets, d: usize) -> Triplets {
    let mut dense = DMatrix::<Complex64>::zeros(d, d);
    for &(r, k, v) in x {
        for &(k2, c, w) in y {
            if k == k2 {
                dense[(r, c)] += v * w;
            }
        }
    }
    dense_to_triplets(&dense)
}

fn dense_to_triplets(m: &DMatrix<Complex64>) -> Triplets {
    let mut out = Vec::new();
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if m[(r, c)] != ZERO {
                out.push((r, c, m[(r, c)]));
            }
        }
    }
    out
}

/// Append `X ρ Y` to the superoperator triplets; `None` stands for identity.
fn push_sandwich(out: &mut Triplets, d: usize, x: Option<&Triplets>, y: Option<&Triplets>, weight: Complex64) {
    match (x, y) {
        (Some(x), None) => {
            for &(i, k, v) in x {
                for j in 0..d {
                    out.push((i * d + j, k * d + j, weight * v));
                }
            }
        }
        (None, Some(y)) => {
            for &(l, j, w) in y {
                for i in 0..d {
                    out.push((i * d + j, i * d + l, weight * w));
                }
            }
        }
        (Some(x), Some(y)) => {
            for &(i, k, v) in x {
                for &(l, j, w) in y {
                    out.push((i * d + j, k * d + l, weight * v * w));
                }
            }
        }
        (None, None) => {
            for i in 0..d * d {
                out.push((i, i, weight));
            }
        }
    }
}

/// Liouvillian `L ρ = -i[H, ρ] + Σ r_c D[c] ρ` in hertz.
pub fn build_generator(spec: &SystemSpec, config: &OracleConfig) -> Result<Generator> {
    spec.check(false)?;
    config.validate()?;
    let dims = config.dims;
    for (levels, n, name) in [(dims.0, spec.n_a0, "mechanical"), (dims.1, spec.n_b0, "LC")] {
        let tail = geometric(levels, n)?[levels - 1];
        if tail > config.tail_threshold {
            return Err(Error::Truncation(format!(
                "{name} bath occupation {n} leaves {tail:.3e} in level {} (threshold {:.1e})",
                levels - 1,
                config.tail_threshold
            )));
        }
    }

    let d = dims.0 * dims.1;
    let a = lowering(dims, Mode::A);
    let b = lowering(dims, Mode::B);
    let ad = adjoint(&a);
    let bd = adjoint(&b);

    let mut h = DMatrix::<Complex64>::zeros(d, d);
    for m in 0..dims.0 {
        for n in 0..dims.1 {
            let k = m * dims.1 + n;
            h[(k, k)] = Complex64::new(spec.omega_a * m as f64 - spec.delta * n as f64, 0.0);
        }
    }
    let g = Complex64::new(spec.g, 0.0);
    let mut coupling = product(&ad, &b, d);
    coupling.extend(product(&a, &bd, d));
    if config.include_counter_rotating {
        coupling.extend(product(&ad, &bd, d));
        coupling.extend(product(&a, &b, d));
    }
    for (r, c, v) in coupling {
        h[(r, c)] += g * v;
    }
    let h = dense_to_triplets(&h);

    let mut triplets = Vec::new();
    push_sandwich(&mut triplets, d, Some(&h), None, -I);
    push_sandwich(&mut triplets, d, None, Some(&h), I);

    let jumps = [
        (spec.gamma0 * (spec.n_a0 + 1.0), &a, &ad),
        (spec.gamma0 * spec.n_a0, &ad, &a),
        (spec.kappa0 * (spec.n_b0 + 1.0), &b, &bd),
        (spec.kappa0 * spec.n_b0, &bd, &b),
    ];
    for (rate, c, cd) in jumps {
        if rate == 0.0 {
            continue;
        }
        let r = Complex64::new(rate, 0.0);
        let cdc = product(cd, c, d);
        push_sandwich(&mut triplets, d, Some(c), Some(cd), r);
        push_sandwich(&mut triplets, d, Some(&cdc), None, -r * 0.5);
        push_sandwich(&mut triplets, d, None, Some(&cdc), -r * 0.5);
    }
    let matrix = CsrMatrix::from_triplets(d * d, triplets);
    log::debug!("generator dims {:?}: {} unknowns, {} nonzeros", dims, d * d, matrix.nnz());
    Ok(Generator { spec: *spec, config: *config, matrix })
}

/// Preconditioner: exact solve on the `k = 0` sector of the pinned system,
/// diagonal scaling elsewhere.
struct SectorPreconditioner {
    sector: Vec<usize>,
    lu: BandedLu,
    inverse_diagonal: Vec<Complex64>,
}

impl SectorPreconditioner {
    fn new(generator: &Generator) -> Result<Self> {
        let d = generator.hilbert_dim();
        let mut sector: Vec<usize> =
            (0..d * d).filter(|&idx| generator.excitations(idx / d) == generator.excitations(idx % d)).collect();
        sector.sort_by_key(|&idx| (generator.excitations(idx / d), idx));
        let mut position = vec![usize::MAX; d * d];
        for (p, &idx) in sector.iter().enumerate() {
            position[idx] = p;
        }

        let mut entries = Vec::new();
        for (p, &row) in sector.iter().enumerate() {
            if row == 0 {
                entries.push((p, p, ONE));
                continue;
            }
            for (col, v) in generator.matrix.row(row) {
                let q = position[col];
                if q != usize::MAX {
                    entries.push((p, q, v));
                }
            }
        }
        let (mut kl, mut ku) = (0, 0);
        for &(r, c, _) in &entries {
            kl = kl.max(r.saturating_sub(c));
            ku = ku.max(c.saturating_sub(r));
        }
        let lu = BandedLu::factor(sector.len(), kl, ku, entries, 1e-10).map_err(|p| {
            Error::Degenerate(format!(
                "stationary state is not unique: pivot {:.2e} at sector column {}",
                p.magnitude, p.column
            ))
        })?;

        let scale = generator.matrix.max_abs();
        let inverse_diagonal = generator
            .matrix
            .diagonal()
            .into_iter()
            .map(|v| if v.norm() > 1e-14 * scale { ONE / v } else { ONE / scale })
            .collect();
        Ok(SectorPreconditioner { sector, lu, inverse_diagonal })
    }

    fn apply(&self, r: &[Complex64], z: &mut [Complex64]) {
        for ((zi, ri), inv) in z.iter_mut().zip(r).zip(&self.inverse_diagonal) {
            *zi = ri * inv;
        }
        let mut block: Vec<Complex64> = self.sector.iter().map(|&i| r[i]).collect();
        self.lu.solve_in_place(&mut block);
        for (&i, v) in self.sector.iter().zip(block) {
            z[i] = v;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadySolution {
    pub state: DensityState,
    pub iterations: usize,
    /// Trace norm of `L(ρ)` relative to the largest generator entry.
    pub residual: f64,
}

pub fn steady_state(generator: &Generator) -> Result<DensityState> {
    solve_steady_state(generator).map(|s| s.state)
}

pub fn solve_steady_state(generator: &Generator) -> Result<SteadySolution> {
    let d = generator.hilbert_dim();
    let n = d * d;
    let pre = SectorPreconditioner::new(generator)?;
    let apply = |x: &[Complex64], y: &mut [Complex64]| {
        generator.matrix.mul_vec_into(x, y, 1.0);
        y[0] = x[0];
    };
    let mut b = vec![ZERO; n];
    b[0] = ONE;
    let mut x = vec![ZERO; n];
    pre.apply(&b, &mut x);
    let report = gmres(apply, |r, z| pre.apply(r, z), &b, &mut x, 40, 4000, 1e-13);
    if !report.converged {
        return Err(Error::NoConvergence(format!(
            "GMRES stopped at relative residual {:.2e} after {} iterations",
            report.relative_residual, report.iterations
        )));
    }
    let raw = DensityState::from_vector(generator.dims(), &x);
    let trace = raw.trace();
    if trace.norm() < 1e-300 || !trace.re.is_finite() {
        return Err(Error::Degenerate("stationary solution has vanishing trace".into()));
    }
    let mut matrix = hermitian_part(&raw.matrix);
    matrix /= Complex64::new(trace.re, 0.0);
    let state = DensityState { dims: generator.dims(), matrix };
    let residual = generator.relative_residual(&state);
    if residual > STEADY_RESIDUAL_TOLERANCE {
        return Err(Error::NoConvergence(format!("stationary residual {residual:.2e}")));
    }
    state.check_physical()?;
    log::debug!("steady state after {} GMRES iterations, residual {:.2e}", report.iterations, residual);
    Ok(SteadySolution { state, iterations: report.iterations, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockTrajectory {
    /// Seconds.
    pub times: Vec<f64>,
    pub states: Vec<DensityState>,
    /// Initial stretch dominated by the LC transient, 3/κ0 in seconds.
    pub transient: f64,
}

impl FockTrajectory {
    pub fn occupations(&self, mode: Mode) -> Vec<f64> {
        self.states.iter().map(|s| mode_occupation(s, mode)).collect()
    }
}

/// Integrate `dρ/dt = 2π L ρ` for `duration` seconds, returning
/// `samples + 1` equally spaced states including the initial one.
pub fn evolve(
    generator: &Generator,
    initial: &DensityState,
    duration: f64,
    samples: usize,
    control: &StepControl,
) -> Result<FockTrajectory> {
    if initial.dims != generator.dims() {
        return Err(Error::param("initial", "dimensions differ from the generator"));
    }
    initial.check_physical()?;
    if !(duration > 0.0) {
        return Err(Error::param("duration", "must be positive"));
    }
    if samples == 0 {
        return Err(Error::param("samples", "must be at least 1"));
    }
    let times: Vec<f64> = (0..=samples).map(|i| duration * i as f64 / samples as f64).collect();
    let scale = angular(1.0);
    let rhs = |_t: f64, y: &Vec<Complex64>, dy: &mut Vec<Complex64>| {
        generator.matrix.mul_vec_into(y, dy, scale);
    };
    let (ys, _) = integrate(rhs, 0.0, &initial.to_vector(), &times, control).map_err(|f| {
        // Explicit stepping is limited by the largest Bohr frequency.
        let stiffness = generator.matrix.max_abs() / generator.spec.gamma0.max(f64::MIN_POSITIVE);
        match f {
            IntegrationFailure::StepUnderflow { t, step } => Error::StepUnderflow { t, step, stiffness },
            IntegrationFailure::TooManySteps { t, max_steps } => Error::TooManySteps { max_steps, t },
        }
    })?;
    let mut states = Vec::with_capacity(ys.len());
    for (y, t) in ys.iter().zip(&times) {
        let state = DensityState::from_vector(generator.dims(), y);
        let drift = (state.trace() - ONE).norm();
        if drift > TRACE_DRIFT_TOLERANCE {
            return Err(Error::Unphysical(format!("trace drifted by {drift:.2e} at t = {t:.3e} s")));
        }
        states.push(state);
    }
    let kappa = generator.spec.kappa0;
    let transient = if kappa > 0.0 { 3.0 / angular(kappa) } else { 0.0 };
    Ok(FockTrajectory { times, states, transient })
}

/// Fit the post-transient occupation decay; the rate is returned in hertz.
pub fn fit_cooling_rate(trajectory: &FockTrajectory, mode: Mode) -> Result<CoolingFit> {
    let values = trajectory.occupations(mode);
    let start = trajectory.times.first().copied().unwrap_or(0.0) + trajectory.transient;
    let fit = fit_decay(&trajectory.times, &values, start, &FitOptions::default())?;
    Ok(CoolingFit { rate: fit.rate / angular(1.0), fit })
}
