//! Sideband cooling of a nanomechanical mode through a periodically modulated
//! linear coupling to a superconducting LC oscillator.
//!
//! Four descriptions of the same system are provided and cross-checked:
//! closed-form rates and occupations ([`analytic`]), exact covariance
//! dynamics ([`gaussian`]), a truncated Fock-space master equation
//! ([`fock`]), and the classical circuit picture ([`semiclassical`]).
//! [`sweep`] drives them over parameter grids and writes CSV.
//!
//! Every rate and frequency at the API surface is an ordinary frequency in
//! hertz; see [`constants::angular`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic;
pub mod constants;
pub mod error;
pub mod fit;
pub mod fock;
pub mod gaussian;
pub mod model;
pub mod ode;
pub mod semiclassical;
pub mod sweep;

pub use error::{Error, Result};
pub use gaussian::{Coupling, Mode};
pub use model::{CircuitParams, ModeParams, SystemSpec};
