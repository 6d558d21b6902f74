//! Three-path superpositions behind the analyzer crystal.
//!
//! The paths are (acf) through the phase shifter/absorber in beam f,
//! (adg) through the elements in beam d, and the empty path (beg).
//! Every path crosses four plates, so in the forward direction all three
//! carry the same crystal factor; in the diffracted direction path (acf)
//! differs from the other two.

use crate::crystal::{diffract_amp, transmit_amp, ComplexAmp, CrystalParams};
use crate::error::{domain, Result};

/// Phase shifters and absorbers inserted in beams d and f.
///
/// Phases are the dimensionless products `chi = Delta * k0`. Absorptions are
/// amplitude exponents: the beam transmission is `T = exp(-2 alpha)`, and
/// `alpha = +inf` blocks the beam completely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopSettings {
    chi_d: f64,
    chi_f: f64,
    alpha_d: f64,
    alpha_f: f64,
}

impl Default for LoopSettings {
    fn default() -> Self {
        Self::empty()
    }
}

fn check_alpha(name: &str, alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(domain(format!("{name} must be >= 0, got {alpha}")));
    }
    Ok(())
}

fn check_phase(name: &str, chi: f64) -> Result<()> {
    if !chi.is_finite() {
        return Err(domain(format!("{name} must be finite, got {chi}")));
    }
    Ok(())
}

/// Amplitude absorption exponent giving transmission `t`.
pub fn alpha_from_transmission(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("transmission must lie in [0, 1], got {t}")));
    }
    if t == 0.0 {
        Ok(f64::INFINITY)
    } else {
        // -0.0 for t = 1 would read oddly in output
        Ok((-0.5 * t.ln()).max(0.0))
    }
}

impl LoopSettings {
    pub fn new(chi_d: f64, chi_f: f64, alpha_d: f64, alpha_f: f64) -> Result<Self> {
        check_phase("chi_d", chi_d)?;
        check_phase("chi_f", chi_f)?;
        check_alpha("alpha_d", alpha_d)?;
        check_alpha("alpha_f", alpha_f)?;
        Ok(Self {
            chi_d,
            chi_f,
            alpha_d,
            alpha_f,
        })
    }

    /// Empty interferometer: no phase shift, no absorption.
    pub const fn empty() -> Self {
        Self {
            chi_d: 0.0,
            chi_f: 0.0,
            alpha_d: 0.0,
            alpha_f: 0.0,
        }
    }

    pub fn chi_d(&self) -> f64 {
        self.chi_d
    }

    pub fn chi_f(&self) -> f64 {
        self.chi_f
    }

    pub fn alpha_d(&self) -> f64 {
        self.alpha_d
    }

    pub fn alpha_f(&self) -> f64 {
        self.alpha_f
    }

    pub fn transmission_d(&self) -> f64 {
        (-2.0 * self.alpha_d).exp()
    }

    pub fn transmission_f(&self) -> f64 {
        (-2.0 * self.alpha_f).exp()
    }

    /// Same settings with the d and f elements exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            chi_d: self.chi_f,
            chi_f: self.chi_d,
            alpha_d: self.alpha_f,
            alpha_f: self.alpha_d,
        }
    }

    /// Same settings with both phases multiplied by `scale` (a wavenumber
    /// ratio `k / k0`).
    pub fn scaled_phases(&self, scale: f64) -> Self {
        Self {
            chi_d: self.chi_d * scale,
            chi_f: self.chi_f * scale,
            ..*self
        }
    }

    /// Path factors of (acf), (adg), (beg).
    pub fn path_factors(&self) -> [ComplexAmp; 3] {
        [
            unchecked_path_factor(self.chi_f, self.alpha_f),
            unchecked_path_factor(self.chi_d, self.alpha_d),
            ComplexAmp::new(1.0, 0.0),
        ]
    }
}

fn unchecked_path_factor(chi: f64, alpha: f64) -> ComplexAmp {
    if alpha == f64::INFINITY {
        return ComplexAmp::new(0.0, 0.0);
    }
    ComplexAmp::from_polar((-alpha).exp(), chi)
}

/// Attenuated phase factor `exp(i chi - alpha)` of one beam.
pub fn path_factor(chi: f64, alpha: f64) -> Result<ComplexAmp> {
    check_phase("chi", chi)?;
    check_alpha("alpha", alpha)?;
    Ok(unchecked_path_factor(chi, alpha))
}

/// Plate amplitudes at `y` and at the mirrored deviation `-y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateAmps {
    pub v0: ComplexAmp,
    pub vg: ComplexAmp,
    pub v0_neg: ComplexAmp,
    pub vg_neg: ComplexAmp,
}

impl PlateAmps {
    pub fn at(y: f64, params: &CrystalParams) -> Self {
        Self {
            v0: transmit_amp(y, params),
            vg: diffract_amp(y, params),
            v0_neg: transmit_amp(-y, params),
            vg_neg: diffract_amp(-y, params),
        }
    }

    /// Crystal factors of the paths (acf), (adg), (beg) in the forward
    /// direction. All three equal `v0^2 vG v0'` with `v0'(y) = vG(-y)`.
    pub fn forward(&self) -> [ComplexAmp; 3] {
        let a = self.v0 * self.v0 * self.vg * self.vg_neg;
        [a, a, a]
    }

    /// Crystal factors of the paths (acf), (adg), (beg) in the diffracted
    /// direction. Path (acf) carries `v0 vG v0 vG'`, the other two
    /// `v0 vG vG v0'`, with `vG'(y) = v0(-y)` and `v0'(y) = vG(-y)`.
    pub fn diffracted(&self) -> [ComplexAmp; 3] {
        let common = self.v0 * self.vg;
        let acf = common * self.v0 * self.v0_neg;
        let other = common * self.vg * self.vg_neg;
        [acf, other, other]
    }
}

pub fn forward_path_amps(y: f64, params: &CrystalParams) -> [ComplexAmp; 3] {
    PlateAmps::at(y, params).forward()
}

pub fn diffracted_path_amps(y: f64, params: &CrystalParams) -> [ComplexAmp; 3] {
    PlateAmps::at(y, params).diffracted()
}

fn superpose(amps: &[ComplexAmp; 3], factors: &[ComplexAmp; 3]) -> ComplexAmp {
    amps.iter().zip(factors).map(|(a, f)| a * f).sum()
}

/// Forward wave behind the analyzer for unit incoming amplitude.
pub fn psi_forward(y: f64, params: &CrystalParams, s: &LoopSettings) -> ComplexAmp {
    superpose(&forward_path_amps(y, params), &s.path_factors())
}

/// Diffracted wave behind the analyzer for unit incoming amplitude.
pub fn psi_diffracted(y: f64, params: &CrystalParams, s: &LoopSettings) -> ComplexAmp {
    superpose(&diffracted_path_amps(y, params), &s.path_factors())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    fn plate(abar: f64) -> CrystalParams {
        CrystalParams::from_abar(abar).unwrap()
    }

    #[test]
    fn path_factor_values() {
        let one = path_factor(0.0, 0.0).unwrap();
        assert_eq!(one, ComplexAmp::new(1.0, 0.0));
        let half_turn = path_factor(PI, 0.0).unwrap();
        assert_abs_diff_eq!(half_turn.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(half_turn.im, 0.0, epsilon = 1e-15);
        let z = path_factor(FRAC_PI_3, 2f64.ln()).unwrap();
        assert_abs_diff_eq!(z.re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(z.im, 0.75f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z.im, 0.4330, epsilon = 1e-4);
        assert_eq!(path_factor(1.0, f64::INFINITY).unwrap(), ComplexAmp::new(0.0, 0.0));
        assert!(path_factor(0.0, -0.1).is_err());
        assert!(LoopSettings::new(0.0, 0.0, -1e-3, 0.0).is_err());
        assert!(LoopSettings::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn transmission_conversion() {
        assert_eq!(alpha_from_transmission(0.0).unwrap(), f64::INFINITY);
        assert_eq!(alpha_from_transmission(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            alpha_from_transmission(0.25).unwrap(),
            2f64.ln(),
            epsilon = 1e-15
        );
        assert!(alpha_from_transmission(1.5).is_err());
        let s = LoopSettings::new(0.0, 0.0, alpha_from_transmission(0.1).unwrap(), 0.0).unwrap();
        assert_abs_diff_eq!(s.transmission_d(), 0.1, epsilon = 1e-15);
    }

    #[test]
    fn forward_empty_at_bragg() {
        let psi = psi_forward(0.0, &plate(FRAC_PI_4), &LoopSettings::empty());
        assert_abs_diff_eq!(psi.norm_sqr(), 9.0 / 16.0, epsilon = 1e-14);
    }

    #[test]
    fn forward_single_path() {
        let p = plate(1.1);
        let blocked = LoopSettings::new(0.4, 2.0, f64::INFINITY, f64::INFINITY).unwrap();
        for y in [-1.5, 0.0, 0.7] {
            let single = forward_path_amps(y, &p)[2].norm_sqr();
            assert_eq!(psi_forward(y, &p, &blocked).norm_sqr(), single);
        }
    }

    #[test]
    fn forward_phase_cancellation() {
        let abar: f64 = 0.9;
        let s = LoopSettings::new(0.0, PI, 0.0, 0.0).unwrap();
        let expected = abar.cos().powi(4) * abar.sin().powi(4);
        assert_abs_diff_eq!(
            psi_forward(0.0, &plate(abar), &s).norm_sqr(),
            expected,
            epsilon = 1e-14
        );
    }

    #[test]
    fn diffracted_single_path() {
        let blocked = LoopSettings::new(0.0, 0.0, f64::INFINITY, f64::INFINITY).unwrap();
        let psi = psi_diffracted(0.0, &plate(FRAC_PI_4), &blocked);
        assert_abs_diff_eq!(psi.norm_sqr(), 0.0625, epsilon = 1e-14);
    }

    #[test]
    fn diffracted_mirror_at_bragg() {
        let p = plate(0.8);
        let v0 = transmit_amp(0.0, &p);
        let vg = diffract_amp(0.0, &p);
        let [acf, adg, _] = diffracted_path_amps(0.0, &p);
        assert_abs_diff_eq!((acf - v0 * v0 * vg * v0).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((adg - v0 * vg * vg * vg).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn diffracted_vanishes_at_transmit_node() {
        let psi = psi_diffracted(0.0, &plate(FRAC_PI_2), &LoopSettings::empty());
        assert_abs_diff_eq!(psi.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn swap_symmetry() {
        let p = plate(2.3);
        let s = LoopSettings::new(0.7, 2.1, 0.3, 1.2).unwrap();
        let mut asym = 0.0f64;
        for y in [-2.0, -0.3, 0.0, 0.9, 4.0] {
            assert_abs_diff_eq!(
                psi_forward(y, &p, &s).norm_sqr(),
                psi_forward(y, &p, &s.swapped()).norm_sqr(),
                epsilon = 1e-14
            );
            asym = asym.max(
                (psi_diffracted(y, &p, &s).norm_sqr()
                    - psi_diffracted(y, &p, &s.swapped()).norm_sqr())
                .abs(),
            );
        }
        assert!(asym > 1e-4, "diffracted intensity unexpectedly swap-symmetric");
    }

    #[test]
    fn global_phase_cancels_in_intensity() {
        let bare = CrystalParams::new(0.5, 0.00641).unwrap();
        let phased = bare.with_global_phase(true);
        let s = LoopSettings::new(1.3, -0.4, 0.2, 0.5).unwrap();
        for y in [-1.0, 0.0, 0.6] {
            assert_abs_diff_eq!(
                psi_forward(y, &bare, &s).norm_sqr(),
                psi_forward(y, &phased, &s).norm_sqr(),
                epsilon = 1e-13
            );
            assert_abs_diff_eq!(
                psi_diffracted(y, &bare, &s).norm_sqr(),
                psi_diffracted(y, &phased, &s).norm_sqr(),
                epsilon = 1e-13
            );
        }
    }
}
