//! Fringe visibilities and the two matching solvers.
//!
//! Single loop (only beam d carries elements):
//!
//! ```text
//! stochastic:    I ~ 1 + T + 2 sqrt(T) cos(chi_d)      V = 2 sqrt(T) / (1 + T)
//! deterministic: I ~ 1 + T + 2 T cos(chi_d)            V = 2 T / (1 + T)
//! ```
//!
//! Double loop with a phase `chi_f` in beam f and `c = cos(chi_f / 2)`:
//!
//! ```text
//! K0 ~ T + 4 sqrt(T) c cos(chi_d - chi_f/2) + 4 c^2    V = 4 sqrt(T) |c| / (4 c^2 + T)
//! ```
//!
//! which reaches one exactly when `T = 4 c^2`. An incoherent background adds
//! to the denominator.

use std::f64::consts::{PI, TAU};

use crate::beamline::{alpha_from_transmission, LoopSettings};
use crate::error::{domain, Error, Result};
use crate::intensity::{
    k0_closed, spectral_damping, Spectrum, DIFFRACTED_ACF_WEIGHT, DIFFRACTED_LOOP_A_WEIGHT,
    FORWARD_PATH_WEIGHT,
};
use crate::quadrature::{golden_section_min, parabolic_polish};

/// How an absorber removes neutrons from a beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AbsorptionMode {
    /// Absorbing material: every neutron's amplitude is scaled by `sqrt(T)`.
    Stochastic,
    /// Chopper or partial cross-section: a fraction `T` passes untouched,
    /// the rest is blocked.
    Deterministic,
}

/// Visibility of a fringe and where its extrema sit in `chi_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityResult {
    pub value: f64,
    pub argmax_chi_d: f64,
    pub argmin_chi_d: f64,
}

/// Extrema of the monochromatic forward fringe over `chi_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub max: f64,
    pub min: f64,
    pub argmax: f64,
    pub argmin: f64,
}

fn check_transmission(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("transmission must lie in [0, 1], got {t}")));
    }
    Ok(())
}

fn check_phase(name: &str, chi: f64) -> Result<()> {
    if !chi.is_finite() {
        return Err(domain(format!("{name} must be finite, got {chi}")));
    }
    Ok(())
}

/// `(I_max - I_min) / (I_max + I_min)`.
pub fn visibility_from_extrema(i_max: f64, i_min: f64) -> Result<f64> {
    if i_min.is_nan() || i_max.is_nan() || i_min < 0.0 {
        return Err(Error::Argument(format!(
            "intensities must be >= 0, got max {i_max}, min {i_min}"
        )));
    }
    if i_max < i_min {
        return Err(Error::Argument(format!(
            "maximum {i_max} is below minimum {i_min}"
        )));
    }
    if i_max == 0.0 {
        return Err(Error::UndefinedFringe("both extrema are zero".into()));
    }
    Ok((i_max - i_min) / (i_max + i_min))
}

/// Visibility of a single-loop interferometer with transmission `t_d` in beam d.
pub fn visibility_single(t_d: f64, mode: AbsorptionMode) -> Result<f64> {
    check_transmission(t_d)?;
    let contrast = match mode {
        AbsorptionMode::Stochastic => t_d.sqrt(),
        AbsorptionMode::Deterministic => t_d,
    };
    Ok(2.0 * contrast / (1.0 + t_d))
}

/// Visibility of the double loop with transmission `t_d` in beam d and beam f empty.
pub fn visibility_double(t_d: f64, mode: AbsorptionMode) -> Result<f64> {
    check_transmission(t_d)?;
    let contrast = match mode {
        AbsorptionMode::Stochastic => t_d.sqrt(),
        AbsorptionMode::Deterministic => t_d,
    };
    Ok(4.0 * contrast / (4.0 + t_d))
}

/// Monochromatic forward fringe `|sqrt(T) e^{i chi_d} + 1 + e^{i chi_f}|^2`.
pub fn k0_monochromatic(chi_d: f64, chi_f: f64, t_d: f64) -> Result<f64> {
    check_transmission(t_d)?;
    check_phase("chi_d", chi_d)?;
    check_phase("chi_f", chi_f)?;
    let half = (0.5 * chi_f).cos();
    Ok(t_d + 2.0 * t_d.sqrt() * (chi_d.cos() + (chi_d - chi_f).cos()) + 4.0 * half * half)
}

/// Extrema of [`k0_monochromatic`] over `chi_d` in closed form.
///
/// `chi_f` is reduced to `[0, 2 pi)`. On `(pi, 2 pi)` the half-angle cosine is
/// negative and maxima and minima trade places; the result always has
/// `max >= min`, with locations in `[0, 2 pi)`.
pub fn k0_extrema(chi_f: f64, t_d: f64) -> Result<Extrema> {
    check_transmission(t_d)?;
    check_phase("chi_f", chi_f)?;
    let phi = chi_f.rem_euclid(TAU);
    let c = (0.5 * phi).cos();
    let root = t_d.sqrt();
    let (argmax, argmin) = if c >= 0.0 {
        (0.5 * phi, (0.5 * phi + PI).rem_euclid(TAU))
    } else {
        ((0.5 * phi + PI).rem_euclid(TAU), 0.5 * phi)
    };
    let c = c.abs();
    Ok(Extrema {
        max: t_d + 4.0 * c * (root + c),
        min: (t_d - 4.0 * c * (root - c)).max(0.0),
        argmax,
        argmin,
    })
}

/// Visibility of the double loop with transmission `t_d` in beam d, phase
/// `chi_f` in beam f and an incoherent background `i_incoh`.
///
/// The background is in the units of [`k0_monochromatic`], where the empty
/// interferometer peaks at 9. With `i_incoh = 0` this is the background-free
/// visibility.
pub fn visibility_double_phase(
    t_d: f64,
    chi_f: f64,
    mode: AbsorptionMode,
    i_incoh: f64,
) -> Result<f64> {
    check_transmission(t_d)?;
    check_phase("chi_f", chi_f)?;
    if !(i_incoh.is_finite() && i_incoh >= 0.0) {
        return Err(domain(format!("background must be >= 0, got {i_incoh}")));
    }
    let c = (0.5 * chi_f).cos().abs();
    let contrast = match mode {
        AbsorptionMode::Stochastic => t_d.sqrt(),
        AbsorptionMode::Deterministic => t_d,
    };
    let denominator = 4.0 * c * c + t_d + i_incoh;
    // cos(pi/2) rounds to ~6e-17, not zero
    if denominator <= f64::EPSILON * f64::EPSILON {
        return Err(Error::UndefinedFringe(format!(
            "no intensity at t_d = {t_d}, chi_f = {chi_f} without background"
        )));
    }
    Ok(4.0 * contrast * c / denominator)
}

/// Ratio `T_f / (1 + T_d + 2 sqrt(T_d) D cos chi_d)` at which the mean forward
/// and diffracted levels coincide, `7/169`.
pub fn balance_ratio() -> f64 {
    (FORWARD_PATH_WEIGHT - DIFFRACTED_LOOP_A_WEIGHT)
        / (DIFFRACTED_ACF_WEIGHT - FORWARD_PATH_WEIGHT)
}

const BALANCE_FLOOR: f64 = 1e-12;

/// Absorption `alpha_f` in beam f that makes the `chi_f`-averaged `K0` and
/// `KG` equal, turning the device into a 50/50 splitter.
///
/// Fails when loop A interferes totally destructively, which would require
/// an opaque absorber.
pub fn solve_balance_absorber(alpha_d: f64, chi_d: f64, epsilon: f64) -> Result<f64> {
    let s = LoopSettings::new(chi_d, 0.0, alpha_d, 0.0)?;
    let spec = Spectrum::new(epsilon)?;
    let amp_d = (-s.alpha_d()).exp();
    let loop_a = 1.0
        + amp_d * amp_d
        + 2.0 * amp_d * spectral_damping(chi_d, spec.epsilon()) * chi_d.cos();
    if loop_a <= BALANCE_FLOOR {
        return Err(Error::UnboundedAbsorption(format!(
            "loop A cancels (bracket {loop_a:e}) at alpha_d = {alpha_d}, chi_d = {chi_d}"
        )));
    }
    Ok(-0.5 * (balance_ratio() * loop_a).ln())
}

/// Phase `chi_f = 2 arccos(sqrt(t_d) / 2)` giving unit stochastic visibility.
///
/// Lies in `[2 pi / 3, pi]`; `t_d = 0` gives the limit `pi`.
pub fn solve_unit_visibility_phase(t_d: f64) -> Result<f64> {
    check_transmission(t_d)?;
    if t_d == 0.0 {
        return Ok(PI);
    }
    Ok(2.0 * (0.5 * t_d.sqrt()).acos())
}

/// Number of uniform `chi_d` samples in [`visibility_numeric`].
pub const SCAN_SAMPLES: usize = 4096;
/// Bracket width at which the golden-section refinement stops.
pub const REFINE_TOL: f64 = 1e-10;
const POLISH_STEP: f64 = 1e-4;
const FLAT_RELATIVE: f64 = 1e-12;

/// Visibility of the forward fringe found by scanning `chi_d` numerically.
///
/// The fringe is either the monochromatic [`k0_monochromatic`] or, with
/// `use_full_closed_form`, the averaged [`k0_closed`] with
/// `alpha_d = -ln(t_d)/2`, no absorber in beam f and bandwidth `epsilon`.
/// Extrema are located on a uniform grid, narrowed by golden-section search
/// and finished with parabolic steps. A flat fringe gives visibility 0 with
/// both locations at 0.
pub fn visibility_numeric(
    chi_f: f64,
    t_d: f64,
    epsilon: f64,
    use_full_closed_form: bool,
) -> Result<VisibilityResult> {
    check_transmission(t_d)?;
    check_phase("chi_f", chi_f)?;
    let spec = Spectrum::new(epsilon)?;
    let alpha_d = alpha_from_transmission(t_d)?;
    let fringe = |chi_d: f64| -> f64 {
        if use_full_closed_form {
            // settings are valid: chi_d finite, alpha_d >= 0
            let s = LoopSettings::new(chi_d, chi_f, alpha_d, 0.0)
                .expect("validated loop settings");
            k0_closed(&s, &spec)
        } else {
            let c = (0.5 * chi_f).cos();
            t_d + 2.0 * t_d.sqrt() * (chi_d.cos() + (chi_d - chi_f).cos()) + 4.0 * c * c
        }
    };

    let step = TAU / SCAN_SAMPLES as f64;
    let samples: Vec<f64> = (0..SCAN_SAMPLES).map(|j| fringe(j as f64 * step)).collect();
    let (i_max, &grid_max) = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty scan");
    let (i_min, &grid_min) = samples
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty scan");

    if grid_max <= 0.0 || grid_max - grid_min <= FLAT_RELATIVE * grid_max {
        return Ok(VisibilityResult {
            value: 0.0,
            argmax_chi_d: 0.0,
            argmin_chi_d: 0.0,
        });
    }

    let refine = |centre: f64, sign: f64| -> f64 {
        let x = golden_section_min(
            |x| sign * fringe(x),
            centre - step,
            centre + step,
            REFINE_TOL,
        );
        parabolic_polish(fringe, x, POLISH_STEP, 4)
    };
    let argmax = refine(i_max as f64 * step, -1.0);
    let argmin = refine(i_min as f64 * step, 1.0);
    let i_max = fringe(argmax).max(grid_max);
    let i_min = fringe(argmin).min(grid_min).max(0.0);
    Ok(VisibilityResult {
        value: visibility_from_extrema(i_max, i_min)?,
        argmax_chi_d: argmax.rem_euclid(TAU),
        argmin_chi_d: argmin.rem_euclid(TAU),
    })
}
