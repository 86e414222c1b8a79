//! Closed-form cooling theory in the weak-coupling limit.
//!
//! All rates are in hertz; every formula here is homogeneous in frequency.

use crate::error::{Error, Result};
use crate::model::SystemSpec;

/// Closed-form predictions for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingPrediction {
    pub cooling_rate: f64,
    pub backaction_floor: f64,
    pub final_occupation: f64,
    /// Sideband transition rates `(A_-, A_+)`, defined only on the red sideband.
    pub sideband: Option<(f64, f64)>,
}

/// Optical-spring style cooling rate from both sideband responses:
///
/// `Γ_c = 4g²κ|Δ|ω_a / ((Δ² - ω_a² + κ²/4)² + ω_a²κ²)`
pub fn cooling_rate(spec: &SystemSpec) -> f64 {
    let SystemSpec { omega_a: w, delta: d, g, kappa0: k, .. } = *spec;
    let detune = d * d - w * w + k * k / 4.0;
    4.0 * g * g * k * d.abs() * w / (detune * detune + w * w * k * k)
}

fn require_red_sideband(spec: &SystemSpec, what: &str) -> Result<()> {
    if spec.on_red_sideband() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} is only defined on the red sideband (delta = -omega_a); got delta = {}, omega_a = {}",
            spec.delta, spec.omega_a
        )))
    }
}

/// Cooling rate on the first red sideband, `4g²/κ / (1 + κ²/16ω_a²)`.
pub fn resonant_cooling_rate(spec: &SystemSpec) -> Result<f64> {
    require_red_sideband(spec, "resonant cooling rate")?;
    let SystemSpec { omega_a: w, g, kappa0: k, .. } = *spec;
    Ok(4.0 * g * g / k / (1.0 + k * k / (16.0 * w * w)))
}

/// Quantum backaction floor `κ²/16ω_a²`.
pub fn backaction_floor(spec: &SystemSpec) -> f64 {
    let SystemSpec { omega_a: w, kappa0: k, .. } = *spec;
    k * k / (16.0 * w * w)
}

/// Stationary occupation from rate balance between the cooling channel
/// (rate `cooling`, floor `floor`) and the mechanical bath.
pub fn rate_balance(cooling: f64, gamma0: f64, floor: f64, n_a0: f64) -> Result<f64> {
    let total = cooling + gamma0;
    if !(total > 0.0) {
        return Err(Error::Domain("cooling rate and mechanical damping both vanish; no stationary occupation".into()));
    }
    Ok((cooling * floor + gamma0 * n_a0) / total)
}

/// `(Γ_c n_0 + γ0 n_a0) / (Γ_c + γ0)`.
pub fn final_occupation(spec: &SystemSpec) -> Result<f64> {
    rate_balance(cooling_rate(spec), spec.gamma0, backaction_floor(spec), spec.n_a0)
}

/// The large-Γ_c form `n_0 + (γ0/Γ_c)(n_a0 - n_0)`.
pub fn final_occupation_approx(spec: &SystemSpec) -> Result<f64> {
    let rate = cooling_rate(spec);
    if rate == 0.0 {
        return Err(Error::Domain("cooling rate vanishes".into()));
    }
    let floor = backaction_floor(spec);
    Ok(floor + spec.gamma0 / rate * (spec.n_a0 - floor))
}

/// Resonant cooling and off-resonant heating transition rates `(A_-, A_+)`
/// on the red sideband.
pub fn sideband_rates(spec: &SystemSpec) -> Result<(f64, f64)> {
    require_red_sideband(spec, "sideband rates")?;
    let SystemSpec { omega_a: w, g, kappa0: k, .. } = *spec;
    Ok((4.0 * g * g / k, g * g * k / (4.0 * w * w)))
}

/// Floor from the sideband rate equations, `A_+ / (A_- - A_+)`.
pub fn sideband_floor(spec: &SystemSpec) -> Result<f64> {
    let (minus, plus) = sideband_rates(spec)?;
    if minus <= plus {
        return Err(Error::Domain("heating rate exceeds cooling rate; no finite floor".into()));
    }
    Ok(plus / (minus - plus))
}

/// Occupation without the counter-rotating term, first order in γ0:
///
/// `(1 + (4(ω_a + Δ)² + κ²) / 4g²) (γ0/κ) n_a0`
///
/// Meaningful near the red sideband.
pub fn rwa_final_occupation(spec: &SystemSpec) -> Result<f64> {
    let SystemSpec { omega_a: w, delta: d, g, gamma0, kappa0: k, n_a0, .. } = *spec;
    if !(g > 0.0) {
        return Err(Error::Domain("rotating-wave occupation diverges at g = 0".into()));
    }
    let mismatch = w + d;
    Ok((1.0 + (4.0 * mismatch * mismatch + k * k) / (4.0 * g * g)) * gamma0 / k * n_a0)
}

/// Beam-splitter-only cooling rate `4g²κ / (κ² + 4(ω_a + Δ)²)`, the rate
/// consistent with [`rwa_final_occupation`].
pub fn rwa_cooling_rate(spec: &SystemSpec) -> f64 {
    let SystemSpec { omega_a: w, delta: d, g, kappa0: k, .. } = *spec;
    let mismatch = w + d;
    4.0 * g * g * k / (k * k + 4.0 * mismatch * mismatch)
}

pub fn predict(spec: &SystemSpec) -> Result<CoolingPrediction> {
    spec.validate()?;
    Ok(CoolingPrediction {
        cooling_rate: cooling_rate(spec),
        backaction_floor: backaction_floor(spec),
        final_occupation: final_occupation(spec)?,
        sideband: sideband_rates(spec).ok(),
    })
}
