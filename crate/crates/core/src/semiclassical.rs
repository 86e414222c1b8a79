//! Semiclassical circuit picture of the cooling: the island voltage driven by
//! the product of gate drive and mechanical motion, and the resulting
//! electrostatic backaction force `F ≈ λ x - m Γ_c ẋ`.
//!
//! Conventions: phasors are `e^{+iωt}`; physical signals are real parts. The
//! gate modulation `2 v_c sin(ω_d t)` has amplitude `2 v_c`. Products of
//! signals are averaged over the fast drive period, keeping the component at
//! the mechanical frequency. The product `v_c(t) x(t)` then drives the island
//! at both `ω_d + ω_a` and `ω_d - ω_a`; the first gives the cooling rate in
//! closed form, the second an opposing (heating) contribution that is small in
//! the resolved-sideband regime.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::{angular, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};
use crate::model::{coupling_constants, implied_mass, lc_frequency, CircuitParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiclassicalParams {
    pub circuit: CircuitParams,
    /// Plate area S_0, m².
    pub plate_area: f64,
    /// ε_0, F/m.
    pub vacuum_permittivity: f64,
    /// Effective mass, kg; derived from the zero-point displacement when `None`.
    pub mass: Option<f64>,
    /// Hz.
    pub drive_frequency: f64,
    /// Hz.
    pub mech_frequency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackactionCoefficients {
    /// λ, N/m.
    pub spring_shift: f64,
    /// Net friction rate Γ_c from both drive sidebands, Hz.
    pub friction_rate: f64,
    /// Contribution of the `ω_d + ω_a` response, Hz.
    pub upper_sideband_rate: f64,
    /// Contribution of the `ω_d - ω_a` response (negative: heating), Hz.
    pub lower_sideband_rate: f64,
    /// `v_b / (v_c x / d_0)` at `ω_d + ω_a`.
    pub island_voltage_gain: Complex64,
}

impl SemiclassicalParams {
    /// Parallel-plate geometry consistent with `C_x0 = ε_0 S_0 / d_0` and the
    /// mass implied by the zero-point displacement.
    pub fn for_circuit(circuit: CircuitParams, drive_frequency: f64, mech_frequency: f64) -> Self {
        SemiclassicalParams {
            circuit,
            plate_area: circuit.c_x0 * circuit.d0 / VACUUM_PERMITTIVITY,
            vacuum_permittivity: VACUUM_PERMITTIVITY,
            mass: None,
            drive_frequency,
            mech_frequency,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.circuit.validate()?;
        for (name, v) in [
            ("plate_area", self.plate_area),
            ("vacuum_permittivity", self.vacuum_permittivity),
            ("drive_frequency", self.drive_frequency),
            ("mech_frequency", self.mech_frequency),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if let Some(m) = self.mass {
            if !(m > 0.0) {
                return Err(Error::param("mass", "must be positive"));
            }
        }
        let mismatch = self.capacitance_mismatch();
        if mismatch > 0.2 {
            log::warn!("parallel-plate capacitance ε0·S0/d0 differs from c_x0 by {:.0}%", mismatch * 100.0);
        }
        Ok(())
    }

    /// `|ε_0 S_0 / d_0 - C_x0| / C_x0`.
    pub fn capacitance_mismatch(&self) -> f64 {
        let c = self.vacuum_permittivity * self.plate_area / self.circuit.d0;
        (c - self.circuit.c_x0).abs() / self.circuit.c_x0
    }

    pub fn mass(&self) -> Result<f64> {
        match self.mass {
            Some(m) => Ok(m),
            None => implied_mass(self.mech_frequency, self.circuit.delta_x0),
        }
    }

    /// LC damping κ0 = 1/(R C_Σ0), rad/s.
    fn kappa(&self) -> f64 {
        1.0 / (self.circuit.resistance * self.circuit.c_sigma0)
    }

    fn omega_b(&self) -> f64 {
        1.0 / (self.circuit.inductance * self.circuit.c_sigma0).sqrt()
    }

    /// Dimensionless island response `v_b / (v_c x / d_0)` at angular frequency `w`.
    fn gain(&self, w: f64) -> Result<Complex64> {
        let wb = self.omega_b();
        let den = Complex64::new(wb * wb - w * w, self.kappa() * w);
        if den.norm() == 0.0 {
            return Err(Error::Domain("undamped circuit driven exactly on resonance".into()));
        }
        Ok(w * w * self.circuit.c_x0 / self.circuit.c_sigma0 / den)
    }
}

/// Island voltage phasor for a drive phasor of amplitude `v_c` and
/// mechanical amplitude `x_amplitude`, at `ω_d + ω_a`:
///
/// `v_b = (ω_d+ω_a)² C_x0 x v_c / (C_Σ0 d_0 (ω_b² - (ω_d+ω_a)² + iκ0(ω_d+ω_a)))`
pub fn island_voltage(params: &SemiclassicalParams, x_amplitude: f64) -> Result<Complex64> {
    params.validate()?;
    let w = angular(params.drive_frequency + params.mech_frequency);
    Ok(params.gain(w)? * params.circuit.v_c * x_amplitude / params.circuit.d0)
}

/// Expand the electrostatic force on the plate to first order in `x`.
pub fn backaction_coefficients(params: &SemiclassicalParams) -> Result<BackactionCoefficients> {
    params.validate()?;
    let c = &params.circuit;
    let w_d = angular(params.drive_frequency);
    let w_a = angular(params.mech_frequency);
    let upper = params.gain(w_d + w_a)?;
    let lower = params.gain(w_d - w_a)?;
    // F phasor per unit x: ε0 S0 v_c²/d0³ (2 + gain(ω_d+ω_a) + conj gain(ω_d-ω_a)).
    let prefactor = params.vacuum_permittivity * params.plate_area * c.v_c * c.v_c / c.d0.powi(3);
    let friction = |im: f64| -> Result<f64> { Ok(-prefactor * im / (w_a * params.mass()?) / (2.0 * PI)) };
    let upper_rate = friction(upper.im)?;
    let lower_rate = friction(-lower.im)?;
    Ok(BackactionCoefficients {
        spring_shift: prefactor * (2.0 + upper.re + lower.re),
        friction_rate: upper_rate + lower_rate,
        upper_sideband_rate: upper_rate,
        lower_sideband_rate: lower_rate,
        island_voltage_gain: upper,
    })
}

/// Closed-form semiclassical cooling rate, all arguments in hertz:
///
/// `Γ_c = 4g²(f_d+f_a)³ κ0 / f_b / (((f_d+f_a)² - f_b²)² + (f_d+f_a)² κ0²)`
pub fn semiclassical_rate(g: f64, f_b: f64, kappa0: f64, f_d: f64, f_a: f64) -> f64 {
    let w = f_d + f_a;
    let mismatch = w * w - f_b * f_b;
    4.0 * g * g * w.powi(3) * kappa0 / f_b / (mismatch * mismatch + w * w * kappa0 * kappa0)
}

/// [`semiclassical_rate`] evaluated with `g_l`, `f_b` and κ0 from the circuit.
pub fn semiclassical_cooling_rate(params: &SemiclassicalParams) -> Result<f64> {
    params.validate()?;
    let g = coupling_constants(&params.circuit)?.g_l;
    let f_b = lc_frequency(&params.circuit)?;
    Ok(semiclassical_rate(g, f_b, params.circuit.lc_damping(), params.drive_frequency, params.mech_frequency))
}

/// Occupation from balancing friction against the mechanical bath; the
/// semiclassical picture has no backaction floor.
pub fn semiclassical_final_occupation(rate: f64, gamma0: f64, n_a0: f64) -> Result<f64> {
    crate::analytic::rate_balance(rate, gamma0, 0.0, n_a0)
}
