//! Physical constants (CODATA 2018 exact SI values where defined).

use std::f64::consts::PI;

/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Converts an ordinary frequency (Hz) to an angular rate (rad/s).
///
/// Every user-facing rate in this crate is an ordinary frequency. The
/// dynamical solvers multiply all of them by 2π so that time is measured in
/// seconds; quantities that are homogeneous in frequency (occupations, rate
/// ratios) are unaffected.
#[inline]
pub fn angular(frequency: f64) -> f64 {
    2.0 * PI * frequency
}
