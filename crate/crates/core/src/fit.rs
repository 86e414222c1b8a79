//! Least-squares fit of a single exponential relaxation,
//! `y(t) = y_f + (y_i - y_f) exp(-r (t - t_w))`.
//!
//! The two amplitudes enter linearly and are eliminated in closed form; the
//! rate is found by a log-spaced scan followed by golden-section refinement.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Largest accepted RMS residual relative to the fitted amplitude.
    pub max_relative_residual: f64,
    /// Required decay of the fitted excess across the window.
    pub min_decay_factor: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { max_relative_residual: 0.05, min_decay_factor: 10.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFit {
    /// Decay rate in inverse time units of the input.
    pub rate: f64,
    pub initial: f64,
    pub final_value: f64,
    pub rms_residual: f64,
    /// RMS residual divided by `|initial - final_value|`.
    pub relative_residual: f64,
    /// Time window actually fitted.
    pub window: (f64, f64),
    pub points: usize,
}

/// Solve the 2×2 linear problem for fixed rate; returns (SSE, y_f, amplitude).
fn project(t: &[f64], y: &[f64], t_w: f64, rate: f64) -> (f64, f64, f64) {
    let n = t.len() as f64;
    let (mut se, mut see, mut sy, mut sey) = (0.0, 0.0, 0.0, 0.0);
    for (&ti, &yi) in t.iter().zip(y) {
        let e = (-rate * (ti - t_w)).exp();
        se += e;
        see += e * e;
        sy += yi;
        sey += e * yi;
    }
    let det = n * see - se * se;
    let (offset, amp) =
        if det.abs() <= 1e-300 { (sy / n, 0.0) } else { ((see * sy - se * sey) / det, (n * sey - se * sy) / det) };
    let sse = t
        .iter()
        .zip(y)
        .map(|(&ti, &yi)| {
            let r = yi - offset - amp * (-rate * (ti - t_w)).exp();
            r * r
        })
        .sum();
    (sse, offset, amp)
}

/// Fit samples with `t >= window_start`.
pub fn fit_decay(times: &[f64], values: &[f64], window_start: f64, options: &FitOptions) -> Result<ExpFit> {
    if times.len() != values.len() {
        return Err(Error::Fit("times and values differ in length".into()));
    }
    let (t, y): (Vec<f64>, Vec<f64>) =
        times.iter().zip(values).filter(|(&ti, _)| ti >= window_start).map(|(&a, &b)| (a, b)).unzip();
    if t.len() < 8 {
        return Err(Error::Fit(format!("only {} samples after the transient window", t.len())));
    }
    let t_w = t[0];
    let span = t[t.len() - 1] - t_w;
    if !(span > 0.0) {
        return Err(Error::Fit("empty fit window".into()));
    }

    // Rates from 0.1 to 1000 e-folds across the window.
    let (lo, hi) = ((0.1 / span).ln(), (1000.0 / span).ln());
    let scan = 400;
    let grid: Vec<f64> = (0..=scan).map(|i| lo + (hi - lo) * i as f64 / scan as f64).collect();
    let sse: Vec<f64> = grid.iter().map(|&lr| project(&t, &y, t_w, lr.exp()).0).collect();
    let best = sse.iter().enumerate().fold(0, |b, (i, &v)| if v < sse[b] { i } else { b });
    if best == 0 {
        return Err(Error::Fit("trajectory does not decay within the window".into()));
    }
    if best == scan {
        return Err(Error::Fit("decay is faster than the sampling resolves".into()));
    }

    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = |lr: f64| project(&t, &y, t_w, lr.exp()).0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let rate = ((a + b) / 2.0).exp();
    let (sse, final_value, amp) = project(&t, &y, t_w, rate);
    let rms = (sse / t.len() as f64).sqrt();
    let relative = if amp != 0.0 { rms / amp.abs() } else { f64::INFINITY };
    let fit = ExpFit {
        rate,
        initial: final_value + amp,
        final_value,
        rms_residual: rms,
        relative_residual: relative,
        window: (t_w, t_w + span),
        points: t.len(),
    };
    if (rate * span).exp() < options.min_decay_factor {
        return Err(Error::Fit(format!(
            "excess decays only by {:.2} over the window (need {})",
            (rate * span).exp(),
            options.min_decay_factor
        )));
    }
    if relative > options.max_relative_residual {
        return Err(Error::Fit(format!(
            "relative residual {relative:.3} exceeds {}: not a single-exponential decay",
            options.max_relative_residual
        )));
    }
    Ok(fit)
}
