use std::fmt;

use super::CircuitSetup;
use crate::error::Result;
use crate::model::{
    build_system, coupling_constants, coupling_ratio, effective_temperature, implied_mass, lc_frequency, SystemSpec,
};

/// Derived quantities of a circuit design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignReport {
    pub setup: CircuitSetup,
    pub lc_frequency: f64,
    pub kappa0: f64,
    pub g_l: f64,
    pub g_r: f64,
    pub coupling_ratio: f64,
    /// Kelvin.
    pub effective_temperature: Option<f64>,
    /// Kilogram.
    pub mass: f64,
    pub spec: SystemSpec,
}

pub fn design(setup: &CircuitSetup) -> Result<DesignReport> {
    setup.circuit.validate()?;
    let spec = build_system(&setup.circuit, &setup.mechanics, setup.drive_frequency)?;
    let f_b = lc_frequency(&setup.circuit)?;
    let couplings = coupling_constants(&setup.circuit)?;
    Ok(DesignReport {
        setup: *setup,
        lc_frequency: f_b,
        kappa0: setup.circuit.lc_damping(),
        g_l: couplings.g_l,
        g_r: couplings.g_r,
        coupling_ratio: coupling_ratio(&setup.circuit)?,
        effective_temperature: effective_temperature(&spec, setup.circuit.t0, f_b).ok(),
        mass: implied_mass(setup.mechanics.frequency, setup.circuit.delta_x0)?,
        spec,
    })
}

impl fmt::Display for DesignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.setup.circuit;
        writeln!(f, "circuit")?;
        writeln!(f, "  C_x0             {:e} F", c.c_x0)?;
        writeln!(f, "  C_Sigma0         {:e} F", c.c_sigma0)?;
        writeln!(f, "  L                {:e} H", c.inductance)?;
        writeln!(f, "  R                {:e} Ohm", c.resistance)?;
        writeln!(f, "  d0               {:e} m", c.d0)?;
        writeln!(f, "  delta_x0         {:e} m", c.delta_x0)?;
        writeln!(f, "  v_c              {:e} V", c.v_c)?;
        writeln!(f, "  T0               {:e} K", c.t0)?;
        writeln!(f, "derived")?;
        writeln!(f, "  lc_frequency     {:e} Hz", self.lc_frequency)?;
        writeln!(f, "  kappa0           {:e} Hz", self.kappa0)?;
        writeln!(f, "  g_l              {:e} Hz", self.g_l)?;
        writeln!(f, "  g_r              {:e} Hz", self.g_r)?;
        writeln!(f, "  g_l/g_r          {:e}", self.coupling_ratio)?;
        writeln!(f, "  mass             {:e} kg", self.mass)?;
        match self.effective_temperature {
            Some(t) => writeln!(f, "  T_eff            {:e} K", t)?,
            None => writeln!(f, "  T_eff            undefined at zero detuning")?,
        }
        let s = &self.spec;
        writeln!(f, "system (drive {:e} Hz)", self.setup.drive_frequency)?;
        writeln!(f, "  omega_a          {:e} Hz", s.omega_a)?;
        writeln!(f, "  delta            {:e} Hz", s.delta)?;
        writeln!(f, "  g                {:e} Hz", s.g)?;
        writeln!(f, "  gamma0           {:e} Hz", s.gamma0)?;
        writeln!(f, "  kappa0           {:e} Hz", s.kappa0)?;
        writeln!(f, "  n_a0             {:e}", s.n_a0)?;
        write!(f, "  n_b0             {:e}", s.n_b0)
    }
}
