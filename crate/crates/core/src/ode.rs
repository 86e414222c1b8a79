//! Adaptive Dormand–Prince 5(4) integration for linear moment and
//! density-matrix equations.

use num_complex::Complex64;

/// Vector space operations needed by the integrator.
pub trait OdeVector: Clone {
    fn zeros_like(&self) -> Self;
    /// `self = base + h * Σ c_i k_i`.
    fn assign_combination(&mut self, base: &Self, h: f64, terms: &[(f64, &Self)]);
    /// Weighted RMS norm of `err` with scale `atol + rtol max(|y0|, |y1|)`.
    fn error_norm(err: &Self, y0: &Self, y1: &Self, rtol: f64, atol: f64) -> f64;
    fn max_abs(&self) -> f64;
}

macro_rules! impl_ode_vector {
    ($t:ty, $zero:expr) => {
        impl OdeVector for Vec<$t> {
            fn zeros_like(&self) -> Self {
                vec![$zero; self.len()]
            }

            fn assign_combination(&mut self, base: &Self, h: f64, terms: &[(f64, &Self)]) {
                self.copy_from_slice(base);
                for &(c, k) in terms {
                    if c == 0.0 {
                        continue;
                    }
                    let w = h * c;
                    for (y, &kv) in self.iter_mut().zip(k.iter()) {
                        *y += kv * w;
                    }
                }
            }

            fn error_norm(err: &Self, y0: &Self, y1: &Self, rtol: f64, atol: f64) -> f64 {
                if err.is_empty() {
                    return 0.0;
                }
                let sum: f64 = err
                    .iter()
                    .zip(y0.iter().zip(y1.iter()))
                    .map(|(e, (a, b))| {
                        let scale = atol + rtol * a.norm_like().max(b.norm_like());
                        let r = e.norm_like() / scale;
                        r * r
                    })
                    .sum();
                (sum / err.len() as f64).sqrt()
            }

            fn max_abs(&self) -> f64 {
                self.iter().map(|v| v.norm_like()).fold(0.0, f64::max)
            }
        }
    };
}

trait NormLike {
    fn norm_like(&self) -> f64;
}

impl NormLike for f64 {
    fn norm_like(&self) -> f64 {
        self.abs()
    }
}

impl NormLike for Complex64 {
    fn norm_like(&self) -> f64 {
        self.norm()
    }
}

impl_ode_vector!(f64, 0.0);
impl_ode_vector!(Complex64, Complex64::new(0.0, 0.0));

/// Error control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// First trial step; chosen from the initial derivative when `None`.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
    /// Steps smaller than this fraction of the total span count as underflow.
    pub min_step_fraction: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl { rtol: 1e-9, atol: 1e-12, initial_step: None, max_steps: 50_000_000, min_step_fraction: 1e-14 }
    }
}

impl StepControl {
    pub fn with_tolerance(rtol: f64) -> Self {
        StepControl { rtol, atol: rtol * 1e-3, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationFailure {
    StepUnderflow { t: f64, step: f64 },
    TooManySteps { t: f64, max_steps: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// Integrate `dy/dt = f(t, y)` from `t0`, returning the state at every time in
/// `outputs` (which must be non-decreasing and not before `t0`).
pub fn integrate<V, F>(
    mut rhs: F,
    t0: f64,
    y0: &V,
    outputs: &[f64],
    control: &StepControl,
) -> Result<(Vec<V>, IntegrationStats), IntegrationFailure>
where
    V: OdeVector,
    F: FnMut(f64, &V, &mut V),
{
    let mut stats = IntegrationStats::default();
    let t_end = outputs.last().copied().unwrap_or(t0);
    let span = (t_end - t0).abs().max(f64::MIN_POSITIVE);
    let min_step = span * control.min_step_fraction;

    let mut y = y0.clone();
    let mut k: Vec<V> = (0..7).map(|_| y0.zeros_like()).collect();
    let mut stage = y0.zeros_like();
    let mut y_new = y0.zeros_like();
    let mut err = y0.zeros_like();
    let zero = y0.zeros_like();

    rhs(t0, &y, &mut k[0]);
    stats.evaluations += 1;

    let mut h = control.initial_step.unwrap_or_else(|| {
        let ys = y.max_abs().max(control.atol);
        let fs = k[0].max_abs();
        if fs > 0.0 {
            0.01 * ys / fs
        } else {
            span * 1e-3
        }
    });
    h = h.min(span).max(min_step);

    let mut t = t0;
    let mut out = Vec::with_capacity(outputs.len());
    for &target in outputs {
        while t < target {
            if stats.accepted + stats.rejected >= control.max_steps {
                return Err(IntegrationFailure::TooManySteps { t, max_steps: control.max_steps });
            }
            let remaining = target - t;
            let clipped = remaining < h;
            let step = if clipped { remaining } else { h };

            {
                let (head, tail) = k.split_at_mut(1);
                stage.assign_combination(&y, step, &[(A2[0], &head[0])]);
                rhs(t + C[1] * step, &stage, &mut tail[0]);
            }
            for s in 2..6 {
                let coeffs: &[f64] = match s {
                    2 => &A3,
                    3 => &A4,
                    4 => &A5,
                    _ => &A6,
                };
                let (done, rest) = k.split_at_mut(s);
                let terms: Vec<(f64, &V)> = coeffs.iter().copied().zip(done.iter()).collect();
                stage.assign_combination(&y, step, &terms);
                rhs(t + C[s] * step, &stage, &mut rest[0]);
            }
            {
                let (done, rest) = k.split_at_mut(6);
                let terms: Vec<(f64, &V)> = B.iter().copied().zip(done.iter()).collect();
                y_new.assign_combination(&y, step, &terms);
                rhs(t + step, &y_new, &mut rest[0]);
            }
            stats.evaluations += 6;

            let terms: Vec<(f64, &V)> = E.iter().copied().zip(k.iter()).collect();
            err.assign_combination(&zero, step, &terms);
            let norm = V::error_norm(&err, &y, &y_new, control.rtol, control.atol);

            let factor = if !norm.is_finite() {
                0.2
            } else if norm == 0.0 {
                5.0
            } else {
                (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            if norm <= 1.0 {
                t = if clipped { target } else { t + step };
                std::mem::swap(&mut y, &mut y_new);
                k.swap(0, 6);
                stats.accepted += 1;
                // A clipped step says nothing about the natural step size.
                if !clipped || factor < 1.0 {
                    h = step * factor;
                }
            } else {
                stats.rejected += 1;
                h = step * factor.min(1.0);
            }
            if h < min_step {
                return Err(IntegrationFailure::StepUnderflow { t, step: h });
            }
        }
        out.push(y.clone());
    }
    Ok((out, stats))
}
