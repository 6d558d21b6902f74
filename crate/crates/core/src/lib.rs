//! Model of a four-plate (double-loop) perfect-crystal neutron interferometer.
//!
//! The crate is layered bottom-up:
//!
//! - [`crystal`]: transmitted and diffracted amplitudes of a single plate.
//! - [`beamline`]: the three-path superpositions behind the analyzer.
//! - [`intensity`]: thickness- and divergence-averaged intensities `K0`, `KG`
//!   in closed form, plus a brute-force quadrature oracle for both.
//! - [`visibility`]: fringe visibilities for single and double loops, the
//!   balance-absorber solver and the unit-visibility phase solver.
//! - [`quadrature`]: the numerical rules the oracle and the solvers lean on.
//!
//! Phases are carried as dimensionless products `chi = Delta * k0` and the
//! spectrum as the relative bandwidth `epsilon = dk / k0`.

pub mod beamline;
pub mod crystal;
pub mod error;
pub mod intensity;
pub mod quadrature;
pub mod visibility;

pub use beamline::{path_factor, psi_diffracted, psi_forward, LoopSettings};
pub use crystal::{diffract_amp, transmit_amp, ComplexAmp, CrystalParams};
pub use error::{Error, Result};
pub use intensity::{
    k0_closed, k0_oracle, kg_closed, kg_oracle, spectral_damping, IntensityOracle,
    IntensityPair, QuadratureConfig, Spectrum,
};
pub use visibility::{
    k0_extrema, k0_monochromatic, solve_balance_absorber, solve_unit_visibility_phase,
    visibility_double, visibility_double_phase, visibility_from_extrema, visibility_numeric,
    visibility_single, AbsorptionMode, Extrema, VisibilityResult,
};
