//! Exact Gaussian dynamics of the linearly coupled pair of modes.
//!
//! Quadratures are `X = (c + c†)/√2`, `P = -i(c - c†)/√2` with `[X, P] = i`
//! and vacuum variance ½, ordered `(X_a, P_a, X_b, P_b)`. The covariance is
//! the symmetrized second moment `V_ij = ½⟨{δR_i, δR_j}⟩`, evolving as
//! `dV/dt = A V + V Aᵀ + D`.

use nalgebra::{Complex, Matrix4, SMatrix, SVector, Vector4};

use crate::constants::angular;
use crate::error::{Error, Result};
use crate::fit::{fit_decay, ExpFit, FitOptions};
use crate::model::SystemSpec;
use crate::ode::{integrate, IntegrationFailure, StepControl};

/// Smallest admissible eigenvalue of `V + iΩ/2`.
pub const PHYSICALITY_TOLERANCE: f64 = -1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// The mechanical mode.
    A,
    /// The LC mode.
    B,
}

impl Mode {
    fn offset(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::B => 2,
        }
    }
}

/// Which part of `g (a + a†)(b + b†)` is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coupling {
    #[default]
    Full,
    /// Beam-splitter part `g (a†b + a b†)` only.
    RotatingWave,
}

/// Drift and diffusion matrices, in hertz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftModel {
    pub drift: Matrix4<f64>,
    pub diffusion: Matrix4<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceState {
    pub mean: Vector4<f64>,
    pub covariance: Matrix4<f64>,
    /// Seconds.
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// Drift eigenvalues in hertz.
    pub eigenvalues: [Complex<f64>; 4],
    pub hurwitz: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<CovarianceState>,
    /// Initial stretch dominated by the LC transient, 3/κ0 in seconds.
    pub transient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoolingFit {
    /// Fitted decay rate of the mode energy, hertz.
    pub rate: f64,
    pub fit: ExpFit,
}

pub fn build_drift(spec: &SystemSpec) -> DriftModel {
    build_drift_with(spec, Coupling::Full)
}

pub fn build_drift_with(spec: &SystemSpec, coupling: Coupling) -> DriftModel {
    let SystemSpec { omega_a: w, delta: d, g, gamma0: ga, kappa0: ka, n_a0, n_b0 } = *spec;
    let mut a = Matrix4::zeros();
    a[(0, 0)] = -ga / 2.0;
    a[(0, 1)] = w;
    a[(1, 0)] = -w;
    a[(1, 1)] = -ga / 2.0;
    a[(2, 2)] = -ka / 2.0;
    a[(2, 3)] = -d;
    a[(3, 2)] = d;
    a[(3, 3)] = -ka / 2.0;
    match coupling {
        Coupling::Full => {
            a[(1, 2)] = -2.0 * g;
            a[(3, 0)] = -2.0 * g;
        }
        Coupling::RotatingWave => {
            a[(0, 3)] = g;
            a[(1, 2)] = -g;
            a[(2, 1)] = g;
            a[(3, 0)] = -g;
        }
    }
    let da = ga * (n_a0 + 0.5);
    let db = ka * (n_b0 + 0.5);
    DriftModel { drift: a, diffusion: Matrix4::from_diagonal(&Vector4::new(da, da, db, db)) }
}

/// Symplectic form for `(X_a, P_a, X_b, P_b)`.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut omega = Matrix4::zeros();
    omega[(0, 1)] = 1.0;
    omega[(1, 0)] = -1.0;
    omega[(2, 3)] = 1.0;
    omega[(3, 2)] = -1.0;
    omega
}

impl CovarianceState {
    pub fn vacuum() -> Self {
        Self::thermal(0.0, 0.0)
    }

    /// Product of thermal states with the given occupations, zero mean.
    pub fn thermal(n_a: f64, n_b: f64) -> Self {
        CovarianceState {
            mean: Vector4::zeros(),
            covariance: Matrix4::from_diagonal(&Vector4::new(n_a + 0.5, n_a + 0.5, n_b + 0.5, n_b + 0.5)),
            time: 0.0,
        }
    }

    /// Smallest eigenvalue of `V + iΩ/2`; non-negative for physical states.
    pub fn min_symplectic_eigenvalue(&self) -> f64 {
        let omega = symplectic_form();
        let h: Matrix4<Complex<f64>> =
            Matrix4::from_fn(|i, j| Complex::new(self.covariance[(i, j)], 0.5 * omega[(i, j)]));
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn asymmetry(&self) -> f64 {
        (self.covariance - self.covariance.transpose()).amax()
    }

    pub fn is_physical(&self) -> bool {
        self.asymmetry() <= 1e-12 * self.covariance.amax().max(1.0)
            && self.min_symplectic_eigenvalue() >= PHYSICALITY_TOLERANCE
    }
}

/// `⟨c†c⟩ = (V_XX + V_PP + ⟨X⟩² + ⟨P⟩² - 1)/2` for the selected mode.
pub fn occupation(state: &CovarianceState, mode: Mode) -> Result<f64> {
    let min = state.min_symplectic_eigenvalue();
    if min < PHYSICALITY_TOLERANCE {
        return Err(Error::Unphysical(format!(
            "covariance violates the uncertainty relation (min eigenvalue of V + iΩ/2 = {min:.3e})"
        )));
    }
    let i = mode.offset();
    let v = &state.covariance;
    let m = &state.mean;
    Ok((v[(i, i)] + v[(i + 1, i + 1)] + m[i] * m[i] + m[i + 1] * m[i + 1] - 1.0) / 2.0)
}

pub fn stability(model: &DriftModel) -> StabilityReport {
    let ev = model.drift.complex_eigenvalues();
    let eigenvalues = [ev[0], ev[1], ev[2], ev[3]];
    let scale = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let hurwitz = eigenvalues.iter().all(|z| z.re < -1e-12 * scale);
    StabilityReport { eigenvalues, hurwitz }
}

impl StabilityReport {
    /// `max|λ| / min|Re λ|`.
    pub fn stiffness_ratio(&self) -> f64 {
        let max = self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let min = self.eigenvalues.iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);
        max / min
    }

    /// Slowest relaxation rate `min|Re λ|`, hertz.
    pub fn slowest_rate(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min)
    }

    pub fn least_stable(&self) -> Complex<f64> {
        self.eigenvalues
            .iter()
            .copied()
            .fold(Complex::new(f64::NEG_INFINITY, 0.0), |a, b| if b.re > a.re { b } else { a })
    }
}

/// `‖A V + V Aᵀ + D‖_F`.
pub fn lyapunov_residual(model: &DriftModel, covariance: &Matrix4<f64>) -> f64 {
    let a = &model.drift;
    (a * covariance + covariance * a.transpose() + model.diffusion).norm()
}

/// Stationary state of a Hurwitz drift: `A V + V Aᵀ + D = 0`, zero mean.
pub fn steady_state(model: &DriftModel) -> Result<CovarianceState> {
    let report = stability(model);
    if !report.hurwitz {
        let z = report.least_stable();
        return Err(Error::Unstable { re: z.re, im: z.im });
    }
    let scale = model.drift.amax();
    let a = model.drift / scale;
    let d = model.diffusion / scale;

    // Column-major vec: vec(A V) = (I ⊗ A) vec V, vec(V Aᵀ) = (A ⊗ I) vec V.
    let eye = Matrix4::<f64>::identity();
    let kron: SMatrix<f64, 16, 16> = eye.kronecker(&a) + a.kronecker(&eye);
    let lu = kron.lu();
    let solve = |rhs: &Matrix4<f64>| -> Result<Matrix4<f64>> {
        let b: SVector<f64, 16> = SVector::from_column_slice(rhs.as_slice());
        let x = lu.solve(&b).ok_or_else(|| Error::NoConvergence("singular Lyapunov operator".into()))?;
        Ok(Matrix4::from_column_slice(x.as_slice()))
    };
    let mut v = solve(&(-d))?;
    for _ in 0..3 {
        let residual = -(a * v + v * a.transpose() + d);
        if residual.norm() <= 1e-15 * d.norm() {
            break;
        }
        v += solve(&residual)?;
    }
    let v = (v + v.transpose()) / 2.0;
    let residual = lyapunov_residual(model, &v);
    let bound = 1e-10 * model.diffusion.norm();
    if residual > bound {
        return Err(Error::NoConvergence(format!("Lyapunov residual {residual:.3e} exceeds {bound:.3e}")));
    }
    Ok(CovarianceState { mean: Vector4::zeros(), covariance: v, time: 0.0 })
}

fn pack(state: &CovarianceState) -> Vec<f64> {
    let mut y = Vec::with_capacity(20);
    y.extend_from_slice(state.mean.as_slice());
    y.extend_from_slice(state.covariance.as_slice());
    y
}

fn unpack(y: &[f64], time: f64) -> CovarianceState {
    let v = Matrix4::from_column_slice(&y[4..20]);
    CovarianceState { mean: Vector4::from_column_slice(&y[..4]), covariance: (v + v.transpose()) / 2.0, time }
}

/// Integrate mean and covariance for `duration` seconds, sampling
/// `samples + 1` equally spaced states (including the initial one).
pub fn evolve(
    model: &DriftModel,
    initial: &CovarianceState,
    duration: f64,
    samples: usize,
    control: &StepControl,
) -> Result<Trajectory> {
    if !(duration > 0.0) {
        return Err(Error::param("duration", "must be positive"));
    }
    if samples == 0 {
        return Err(Error::param("samples", "must be at least 1"));
    }
    let a = model.drift.map(angular);
    let d = model.diffusion.map(angular);
    let at = a.transpose();
    let times: Vec<f64> = (0..=samples).map(|i| initial.time + duration * i as f64 / samples as f64).collect();
    let rhs = |_t: f64, y: &Vec<f64>, dy: &mut Vec<f64>| {
        let mean = Vector4::from_column_slice(&y[..4]);
        let v = Matrix4::from_column_slice(&y[4..20]);
        let dm = a * mean;
        let dv = a * v + v * at + d;
        dy[..4].copy_from_slice(dm.as_slice());
        dy[4..].copy_from_slice(dv.as_slice());
    };
    let (ys, _) = integrate(rhs, initial.time, &pack(initial), &times, control).map_err(|f| {
        let stiffness = stability(model).stiffness_ratio();
        match f {
            IntegrationFailure::StepUnderflow { t, step } => Error::StepUnderflow { t, step, stiffness },
            IntegrationFailure::TooManySteps { t, max_steps } => Error::TooManySteps { max_steps, t },
        }
    })?;
    let states = ys.iter().zip(&times).map(|(y, &t)| unpack(y, t)).collect();
    let kappa = -2.0 * model.drift[(2, 2)];
    let transient = if kappa > 0.0 { 3.0 / angular(kappa) } else { 0.0 };
    Ok(Trajectory { states, transient })
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.time).collect()
    }

    pub fn occupations(&self, mode: Mode) -> Result<Vec<f64>> {
        self.states.iter().map(|s| occupation(s, mode)).collect()
    }
}

/// Fit `n_f + (n_i - n_f) exp(-Γ t)` to the post-transient part of a
/// trajectory; Γ is returned in hertz.
pub fn fit_cooling_rate(trajectory: &Trajectory, mode: Mode) -> Result<CoolingFit> {
    fit_cooling_rate_with(trajectory, mode, &FitOptions::default())
}

pub fn fit_cooling_rate_with(trajectory: &Trajectory, mode: Mode, options: &FitOptions) -> Result<CoolingFit> {
    let times = trajectory.times();
    let values = trajectory.occupations(mode)?;
    let start = times.first().copied().unwrap_or(0.0) + trajectory.transient;
    let fit = fit_decay(&times, &values, start, options)?;
    Ok(CoolingFit { rate: fit.rate / angular(1.0), fit })
}

/// Cooling rate read off the drift spectrum: twice the damping of the
/// eigenmode with the largest mechanical weight, minus γ0. Hertz.
pub fn spectral_cooling_rate(spec: &SystemSpec) -> Result<f64> {
    let model = build_drift(spec);
    let report = stability(&model);
    let a: Matrix4<Complex<f64>> = model.drift.map(|x| Complex::new(x, 0.0));
    let mut best = (f64::NEG_INFINITY, Complex::new(0.0, 0.0));
    for &lambda in &report.eigenvalues {
        let shifted = a - Matrix4::from_diagonal_element(lambda);
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.ok_or_else(|| Error::NoConvergence("eigenvector SVD failed".into()))?;
        let (k, _) = svd.singular_values.argmin();
        let row = v_t.row(k);
        let weight = (row[0].norm_sqr() + row[1].norm_sqr()) / row.norm_squared();
        if weight > best.0 {
            best = (weight, lambda);
        }
    }
    Ok(-2.0 * best.1.re - spec.gamma0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use approx::assert_relative_eq;

    fn weak() -> SystemSpec {
        SystemSpec { g: 0.2e6, ..SystemSpec::benchmark() }
    }

    /// Independent transcription: Heisenberg equations for a, b written as
    /// complex linear maps, converted to quadratures by the unitary
    /// `X = (c + c†)/√2`, `P = -i(c - c†)/√2`.
    fn drift_from_ladder(spec: &SystemSpec) -> Matrix4<f64> {
        let i = Complex::new(0.0, 1.0);
        let one = Complex::new(1.0, 0.0);
        let SystemSpec { omega_a: w, delta: d, g, gamma0: ga, kappa0: ka, .. } = *spec;
        // Ladder vector (a, a†, b, b†).
        let mut m = Matrix4::<Complex<f64>>::zeros();
        m[(0, 0)] = -i * w - one * (ga / 2.0);
        m[(0, 2)] = -i * g;
        m[(0, 3)] = -i * g;
        m[(1, 1)] = i * w - one * (ga / 2.0);
        m[(1, 2)] = i * g;
        m[(1, 3)] = i * g;
        m[(2, 2)] = i * d - one * (ka / 2.0);
        m[(2, 0)] = -i * g;
        m[(2, 1)] = -i * g;
        m[(3, 3)] = -i * d - one * (ka / 2.0);
        m[(3, 0)] = i * g;
        m[(3, 1)] = i * g;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut t = Matrix4::<Complex<f64>>::zeros();
        for blk in [0usize, 2] {
            t[(blk, blk)] = one * s;
            t[(blk, blk + 1)] = one * s;
            t[(blk + 1, blk)] = -i * s;
            t[(blk + 1, blk + 1)] = i * s;
        }
        let t_inv = t.try_inverse().unwrap();
        (t * m * t_inv).map(|z| {
            assert!(z.im.abs() < 1e-9 * (1.0 + z.re.abs()));
            z.re
        })
    }

    #[test]
    fn drift_matches_ladder_transcription() {
        for spec in [SystemSpec::benchmark(), SystemSpec::scaled_benchmark(), weak()] {
            let a = build_drift(&spec).drift;
            let reference = drift_from_ladder(&spec);
            assert!((a - reference).amax() <= 1e-9 * a.amax());
        }
        let a = build_drift(&SystemSpec::benchmark()).drift;
        assert_eq!(a[(1, 2)], -4e6);
        assert_eq!(a[(3, 0)], -4e6);
    }

    #[test]
    fn uncoupled_drift_is_block_diagonal() {
        let spec = SystemSpec { g: 0.0, ..SystemSpec::benchmark() };
        let a = build_drift(&spec).drift;
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0), (3, 1)] {
            assert_eq!(a[(i, j)], 0.0);
        }
    }

    #[test]
    fn hamiltonian_limit_preserves_symplectic_form() {
        for coupling in [Coupling::Full, Coupling::RotatingWave] {
            let spec = SystemSpec { gamma0: 0.0, kappa0: 0.0, ..SystemSpec::benchmark() };
            let a = build_drift_with(&spec, coupling).drift;
            let omega = symplectic_form();
            assert!((a * omega + omega * a.transpose()).amax() < 1e-6);
        }
    }

    #[test]
    fn uncoupled_steady_state_is_thermal() {
        let spec = SystemSpec { g: 0.0, n_a0: 20.0, n_b0: 0.3, ..SystemSpec::benchmark() };
        let ss = steady_state(&build_drift(&spec)).unwrap();
        let expected = CovarianceState::thermal(20.0, 0.3).covariance;
        assert!((ss.covariance - expected).amax() < 1e-10);
        assert!((occupation(&ss, Mode::A).unwrap() - 20.0).abs() < 1e-10);
        assert!((occupation(&ss, Mode::B).unwrap() - 0.3).abs() < 1e-10);
    }

    #[test]
    fn weak_coupling_steady_state_tracks_rate_balance() {
        let spec = weak();
        let model = build_drift(&spec);
        let ss = steady_state(&model).unwrap();
        assert!(lyapunov_residual(&model, &ss.covariance) <= 1e-10 * model.diffusion.norm());
        let n = occupation(&ss, Mode::A).unwrap();
        let analytic = analytic::final_occupation(&spec).unwrap();
        assert!((analytic - 0.957).abs() < 1e-3);
        assert!((n / analytic - 1.0).abs() < 0.05, "gaussian {n} vs {analytic}");
    }

    /// At g/κ = 0.5 the exact stationary occupation follows the
    /// strong-coupling sideband result
    /// `γ n_a0 (4g² + κ²)/(4g²κ) + (κ² + 8g²)/(16 ω_a²)`, which is about
    /// 2.2 times the weak-coupling rate-balance value.
    #[test]
    fn benchmark_steady_state_matches_strong_coupling_formula() {
        let spec = SystemSpec::benchmark();
        let ss = steady_state(&build_drift(&spec)).unwrap();
        let n = occupation(&ss, Mode::A).unwrap();
        let (g, k, w, ga) = (spec.g, spec.kappa0, spec.omega_a, spec.gamma0);
        let strong =
            ga * spec.n_a0 * (4.0 * g * g + k * k) / (4.0 * g * g * k) + (k * k + 8.0 * g * g) / (16.0 * w * w);
        assert!((n / strong - 1.0).abs() < 0.03, "gaussian {n} vs {strong}");
        assert!(ss.is_physical());
    }

    #[test]
    fn rotating_wave_removes_the_floor() {
        // Zero-temperature mechanical bath: only the counter-rotating term heats.
        let spec = SystemSpec { n_a0: 0.0, ..SystemSpec::scaled_benchmark() };
        let rwa = steady_state(&build_drift_with(&spec, Coupling::RotatingWave)).unwrap();
        assert!(occupation(&rwa, Mode::A).unwrap().abs() < 1e-12);
        let full = steady_state(&build_drift(&spec)).unwrap();
        assert!(occupation(&full, Mode::A).unwrap() > 1e-3);
    }

    #[test]
    fn stability_reports() {
        assert!(stability(&build_drift(&SystemSpec::benchmark())).hurwitz);
        let closed = SystemSpec { gamma0: 0.0, kappa0: 0.0, ..SystemSpec::benchmark() };
        let report = stability(&build_drift(&closed));
        assert!(!report.hurwitz);
        assert!(report.eigenvalues.iter().all(|z| z.re.abs() < 1e-6 * z.norm()));

        // Blue sideband: two-mode squeezing overwhelms damping as g grows.
        let blue = SystemSpec { delta: 1.0, ..SystemSpec::scaled_benchmark() };
        let mut g = 1e-3;
        let mut crossed = None;
        while g < 0.5 {
            let report = stability(&build_drift(&SystemSpec { g, ..blue }));
            if !report.hurwitz {
                crossed = Some(g);
                break;
            }
            g *= 1.05;
        }
        let g_crit = crossed.expect("blue detuning never became unstable");
        // Threshold of the resonant parametric amplifier: 4g² = γκ.
        let expected = (blue.gamma0 * blue.kappa0).sqrt() / 2.0;
        assert!(g_crit > expected * 0.9 && g_crit < expected * 1.2, "g_crit = {g_crit}");
        let err = steady_state(&build_drift(&SystemSpec { g: 0.1, ..blue })).unwrap_err();
        assert!(matches!(err, Error::Unstable { re, .. } if re >= 0.0));
    }

    #[test]
    fn occupation_of_simple_states() {
        assert_eq!(occupation(&CovarianceState::vacuum(), Mode::A).unwrap(), 0.0);
        let s = CovarianceState::thermal(3.0, 0.25);
        assert!((occupation(&s, Mode::A).unwrap() - 3.0).abs() < 1e-15);
        assert!((occupation(&s, Mode::B).unwrap() - 0.25).abs() < 1e-15);
        let mut squeezed_too_far = CovarianceState::vacuum();
        squeezed_too_far.covariance[(0, 0)] = 0.1;
        assert!(occupation(&squeezed_too_far, Mode::A).is_err());
    }

    #[test]
    fn steady_initial_state_stays_put() {
        let spec = SystemSpec::scaled_benchmark();
        let model = build_drift(&spec);
        let ss = steady_state(&model).unwrap();
        let n0 = occupation(&ss, Mode::A).unwrap();
        let traj = evolve(&model, &ss, 10.0 / spec.gamma0, 20, &StepControl::default()).unwrap();
        for n in traj.occupations(Mode::A).unwrap() {
            assert!((n - n0).abs() < 1e-9, "{n} vs {n0}");
        }
    }

    #[test]
    fn closed_system_conserves_occupations() {
        let spec = SystemSpec { g: 0.0, gamma0: 0.0, kappa0: 0.0, ..SystemSpec::scaled_benchmark() };
        let model = build_drift(&spec);
        let initial = CovarianceState::thermal(2.0, 0.5);
        let traj = evolve(&model, &initial, 50.0, 10, &StepControl::default()).unwrap();
        for s in &traj.states {
            assert!((occupation(s, Mode::A).unwrap() - 2.0).abs() < 1e-8);
            assert!((occupation(s, Mode::B).unwrap() - 0.5).abs() < 1e-8);
        }
    }

    #[test]
    fn evolve_matches_matrix_exponential() {
        let spec = SystemSpec::scaled_benchmark();
        let model = build_drift(&spec);
        let ss = steady_state(&model).unwrap();
        let mut initial = CovarianceState::thermal(1.0, 0.0);
        initial.mean = Vector4::new(1.0, -0.5, 0.2, 0.0);
        let t = 7.3;
        let traj = evolve(&model, &initial, t, 1, &StepControl::default()).unwrap();
        let propagator = (model.drift.map(angular) * t).exp();
        let v = propagator * (initial.covariance - ss.covariance) * propagator.transpose() + ss.covariance;
        let last = traj.states.last().unwrap();
        assert!((last.covariance - v).amax() < 1e-7);
        assert!((last.mean - propagator * initial.mean).amax() < 1e-7);
    }

    #[test]
    fn weak_coupling_fit_matches_cooling_rate() {
        let spec = weak();
        let model = build_drift(&spec);
        let initial = CovarianceState::thermal(spec.n_a0, spec.n_b0);
        let expected = analytic::cooling_rate(&spec);
        let duration = 4.0 / angular(expected + spec.gamma0);
        let traj = evolve(&model, &initial, duration, 400, &StepControl::default()).unwrap();
        let fit = fit_cooling_rate(&traj, Mode::A).unwrap();
        assert!((fit.rate / expected - 1.0).abs() < 0.10, "fit {} vs {expected}", fit.rate);
        assert_relative_eq!(expected, 39.9e3, max_relative = 1e-3);
    }

    #[test]
    fn uncoupled_fit_recovers_bare_damping() {
        let spec = SystemSpec { g: 0.0, ..SystemSpec::benchmark() };
        let model = build_drift(&spec);
        // Heating from the ground state relaxes at the bare rate.
        let initial = CovarianceState::vacuum();
        let duration = 4.0 / angular(spec.gamma0);
        let traj = evolve(&model, &initial, duration, 200, &StepControl::default()).unwrap();
        let fit = fit_cooling_rate(&traj, Mode::A).unwrap();
        assert!((fit.rate / spec.gamma0 - 1.0).abs() < 0.05, "fit {}", fit.rate);
    }

    #[test]
    fn spectral_rate_matches_weak_coupling_formula() {
        let spec = weak();
        let rate = spectral_cooling_rate(&spec).unwrap();
        let expected = analytic::cooling_rate(&spec);
        assert!((rate / expected - 1.0).abs() < 0.02, "{rate} vs {expected}");
        let off = SystemSpec { g: 0.0, ..spec };
        assert!(spectral_cooling_rate(&off).unwrap().abs() < 1e-6 * spec.gamma0);
    }
}
