//! Dynamical-diffraction amplitudes of one perfect-crystal plate.
//!
//! For a symmetric Laue plate the forward (`v0`) and Bragg-diffracted (`vG`)
//! amplitudes depend on the deviation parameter `y` and on
//! `abar = pi * D / L0`, where `L0` is the Pendelloesung length:
//!
//! ```text
//! v0(y) = e^{iPD} [cos(abar sqrt(1+y^2)) + i y sin(abar sqrt(1+y^2)) / sqrt(1+y^2)]
//! vG(y) = -i e^{iPD} sin(abar sqrt(1+y^2)) / sqrt(1+y^2)
//! ```
//!
//! with `P = -pi (1+y) / L0`. The mirrored partners are `v0'(y) = vG(-y)` and
//! `vG'(y) = v0(-y)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Complex wave amplitude.
pub type ComplexAmp = Complex64;

/// Geometry of a single crystal plate. All four plates share it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalParams {
    thickness: f64,
    pendelloesung: f64,
    include_global_phase: bool,
}

impl CrystalParams {
    /// Plate thickness `D` and Pendelloesung length `L0`, both in cm.
    pub fn new(thickness: f64, pendelloesung: f64) -> Result<Self> {
        if !(thickness.is_finite() && thickness > 0.0) {
            return Err(domain(format!("plate thickness must be > 0, got {thickness}")));
        }
        if !(pendelloesung.is_finite() && pendelloesung > 0.0) {
            return Err(domain(format!(
                "Pendelloesung length must be > 0, got {pendelloesung}"
            )));
        }
        Ok(Self {
            thickness,
            pendelloesung,
            include_global_phase: false,
        })
    }

    /// Plate with a given oscillation parameter, using a unit Pendelloesung length.
    pub fn from_abar(abar: f64) -> Result<Self> {
        if !(abar.is_finite() && abar > 0.0) {
            return Err(domain(format!("abar must be > 0, got {abar}")));
        }
        Self::new(abar / PI, 1.0)
    }

    /// Keep the common factor `e^{iPD}` on every amplitude.
    pub fn with_global_phase(mut self, on: bool) -> Self {
        self.include_global_phase = on;
        self
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn pendelloesung(&self) -> f64 {
        self.pendelloesung
    }

    pub fn include_global_phase(&self) -> bool {
        self.include_global_phase
    }

    /// `pi * D / L0`, the number of half Pendelloesung periods in one plate.
    pub fn abar(&self) -> f64 {
        PI * self.thickness / self.pendelloesung
    }

    /// Wave-vector shift `P = -pi (1 + y) / L0`.
    pub fn p_shift(&self, y: f64) -> f64 {
        -PI * (1.0 + y) / self.pendelloesung
    }

    fn global_phase(&self, y: f64) -> ComplexAmp {
        if self.include_global_phase {
            ComplexAmp::from_polar(1.0, self.p_shift(y) * self.thickness)
        } else {
            ComplexAmp::new(1.0, 0.0)
        }
    }

    /// The rapidly varying plate phase `abar * sqrt(1 + y^2)`.
    pub fn plate_phase(&self, y: f64) -> f64 {
        self.abar() * (1.0 + y * y).sqrt()
    }
}

/// Pendelloesung length `L0 = lambda cos(gamma) / |V(G)/E|` (cm).
///
/// `beam_angle` is the angle between the beam and the surface normal.
pub fn pendelloesung(lambda: f64, beam_angle: f64, potential_ratio: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(domain(format!("wavelength must be > 0, got {lambda}")));
    }
    if !(potential_ratio.is_finite() && potential_ratio > 0.0) {
        return Err(domain(format!(
            "potential ratio |V(G)/E| must be > 0, got {potential_ratio}"
        )));
    }
    if !(beam_angle.abs() < PI / 2.0) {
        return Err(domain(format!(
            "beam angle must satisfy |gamma| < pi/2, got {beam_angle}"
        )));
    }
    Ok(lambda * beam_angle.cos() / potential_ratio)
}

/// Deviation parameter `y = k sin(2 theta_B) (theta_B - theta) / |V(G)/E|`.
///
/// Positive for incidence below the Bragg angle.
pub fn deviation_y(k: f64, theta: f64, theta_bragg: f64, potential_ratio: f64) -> Result<f64> {
    if !(potential_ratio.is_finite() && potential_ratio > 0.0) {
        return Err(domain(format!(
            "potential ratio |V(G)/E| must be > 0, got {potential_ratio}"
        )));
    }
    let y = k * (2.0 * theta_bragg).sin() * (theta_bragg - theta) / potential_ratio;
    if !y.is_finite() {
        return Err(domain("deviation parameter is not finite"));
    }
    Ok(y)
}

/// Forward and diffracted amplitudes at a prescribed plate phase.
///
/// Used where the plate phase is averaged over directly instead of being
/// derived from a thickness. No global phase is attached.
pub fn plate_amplitudes_at_phase(y: f64, phase: f64) -> (ComplexAmp, ComplexAmp) {
    let root = (1.0 + y * y).sqrt();
    let (s, c) = phase.sin_cos();
    let v0 = ComplexAmp::new(c, y * s / root);
    let vg = ComplexAmp::new(0.0, -s / root);
    (v0, vg)
}

/// Forward (transmitted) amplitude `v0(y)` of one plate.
pub fn transmit_amp(y: f64, params: &CrystalParams) -> ComplexAmp {
    let (v0, _) = plate_amplitudes_at_phase(y, params.plate_phase(y));
    v0 * params.global_phase(y)
}

/// Diffracted amplitude `vG(y)` of one plate.
pub fn diffract_amp(y: f64, params: &CrystalParams) -> ComplexAmp {
    let (_, vg) = plate_amplitudes_at_phase(y, params.plate_phase(y));
    vg * params.global_phase(y)
}
