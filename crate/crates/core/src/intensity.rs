//! Mean intensities `K0` (forward) and `KG` (diffracted) behind the analyzer.
//!
//! Plates a few mm thick give `abar >> 1`, so the squared amplitudes are
//! averaged over the fast plate phase, integrated over the deviation
//! parameter `y` (beam divergence) and averaged over a Gaussian spectrum of
//! relative width `epsilon`. The result is a pair of closed forms in the
//! loop settings. [`IntensityOracle`] recomputes both by brute-force
//! quadrature straight from the crystal amplitudes.

use std::f64::consts::{PI, SQRT_2};

use num_rational::Ratio;

use crate::beamline::{LoopSettings, PlateAmps};
use crate::crystal::{plate_amplitudes_at_phase, ComplexAmp};
use crate::error::{domain, Error, Result};
use crate::quadrature::{gauss_hermite, tan_substitution_rule, Rule};

/// Relative bandwidth used by every figure.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Common prefactor `pi / 2048` of both closed forms.
pub const INTENSITY_UNIT: f64 = PI / 2048.0;

/// Forward single-path weight (in units of [`INTENSITY_UNIT`]).
pub const FORWARD_PATH_WEIGHT: f64 = 79.0;
/// Diffracted weight of each of the paths (adg), (beg).
pub const DIFFRACTED_LOOP_A_WEIGHT: f64 = 65.0;
/// Diffracted weight of path (acf).
pub const DIFFRACTED_ACF_WEIGHT: f64 = 417.0;
/// Diffracted interference weight between (acf) and the other two paths.
pub const DIFFRACTED_CROSS_WEIGHT: f64 = -79.0;

/// Gaussian wavenumber spectrum, described by `epsilon = dk / k0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    epsilon: f64,
}

impl Default for Spectrum {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl Spectrum {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(domain(format!("relative bandwidth must be >= 0, got {epsilon}")));
        }
        Ok(Self { epsilon })
    }

    pub const fn monochromatic() -> Self {
        Self { epsilon: 0.0 }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Forward and diffracted mean intensities for unit incoming amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityPair {
    pub k0_forward: f64,
    pub kg_diffracted: f64,
}

/// Sample counts for [`IntensityOracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    /// Uniform samples of the plate phase over one period.
    pub phase_samples: usize,
    /// Midpoint cells of the `y = tan t` integral.
    pub y_nodes: usize,
    /// Gauss-Hermite nodes of the spectral average.
    pub k_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            phase_samples: 512,
            y_nodes: 257,
            k_nodes: 41,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let QuadratureConfig {
            phase_samples,
            y_nodes,
            k_nodes,
        } = *self;
        if phase_samples < 3 || y_nodes < 3 || k_nodes < 3 {
            return Err(Error::Config(format!(
                "all sample counts must be >= 3 (phase {phase_samples}, y {y_nodes}, k {k_nodes})"
            )));
        }
        if phase_samples % 2 != 0 {
            return Err(Error::Config(format!(
                "phase_samples must be even, got {phase_samples}"
            )));
        }
        Ok(())
    }
}

/// Mean of `sin^(2n) x` over a period, for `n` in `1..=4`.
pub fn mean_sin_power(n: u32) -> Result<Ratio<u64>> {
    if !(1..=4).contains(&n) {
        return Err(domain(format!("exponent index must be in 1..=4, got {n}")));
    }
    // binomial(2n, n) / 4^n
    let n = u64::from(n);
    let binom = (1..=n).fold(1u64, |acc, i| acc * (n + i) / i);
    Ok(Ratio::new(binom, 4u64.pow(n as u32)))
}

/// Gaussian fringe envelope `exp(-epsilon^2 chi^2 / 2)`.
pub fn spectral_damping(chi: f64, epsilon: f64) -> f64 {
    (-0.5 * (epsilon * chi).powi(2)).exp()
}

struct Terms {
    t_d: f64,
    t_f: f64,
    cos_d: f64,
    cos_f: f64,
    cos_df: f64,
}

impl Terms {
    fn new(s: &LoopSettings, spec: &Spectrum) -> Self {
        let eps = spec.epsilon();
        let amp_d = (-s.alpha_d()).exp();
        let amp_f = (-s.alpha_f()).exp();
        let diff = s.chi_d() - s.chi_f();
        Self {
            t_d: amp_d * amp_d,
            t_f: amp_f * amp_f,
            cos_d: amp_d * spectral_damping(s.chi_d(), eps) * s.chi_d().cos(),
            cos_f: amp_f * spectral_damping(s.chi_f(), eps) * s.chi_f().cos(),
            cos_df: amp_d * amp_f * spectral_damping(diff, eps) * diff.cos(),
        }
    }
}

/// Closed-form forward intensity `K0`.
pub fn k0_closed(s: &LoopSettings, spec: &Spectrum) -> f64 {
    let t = Terms::new(s, spec);
    let bracket =
        1.0 + t.t_d + t.t_f + 2.0 * t.cos_d + 2.0 * t.cos_f + 2.0 * t.cos_df;
    (FORWARD_PATH_WEIGHT * INTENSITY_UNIT * bracket).max(0.0)
}

/// Closed-form diffracted intensity `KG`.
pub fn kg_closed(s: &LoopSettings, spec: &Spectrum) -> f64 {
    let t = Terms::new(s, spec);
    let a = DIFFRACTED_LOOP_A_WEIGHT;
    let bracket = a * (1.0 + t.t_d)
        + DIFFRACTED_ACF_WEIGHT * t.t_f
        + 2.0 * a * t.cos_d
        + 2.0 * DIFFRACTED_CROSS_WEIGHT * t.cos_f
        + 2.0 * DIFFRACTED_CROSS_WEIGHT * t.cos_df;
    (INTENSITY_UNIT * bracket).max(0.0)
}

pub fn intensities(s: &LoopSettings, spec: &Spectrum) -> IntensityPair {
    IntensityPair {
        k0_forward: k0_closed(s, spec),
        kg_diffracted: kg_closed(s, spec),
    }
}

/// Mean levels of `K0` and `KG` with the `chi_f` dependence averaged out.
///
/// Every term containing `chi_f` is a damped cosine whose long-run mean over
/// `chi_f` vanishes; what remains are the levels the fringes oscillate about.
pub fn mean_levels_over_chi_f(s: &LoopSettings, spec: &Spectrum) -> IntensityPair {
    let t = Terms::new(s, spec);
    let loop_a = 1.0 + t.t_d + 2.0 * t.cos_d;
    IntensityPair {
        k0_forward: FORWARD_PATH_WEIGHT * INTENSITY_UNIT * (loop_a + t.t_f),
        kg_diffracted: INTENSITY_UNIT
            * (DIFFRACTED_LOOP_A_WEIGHT * loop_a + DIFFRACTED_ACF_WEIGHT * t.t_f),
    }
}

type Coherence = [[ComplexAmp; 3]; 3];

/// Brute-force evaluation of the mean intensities.
///
/// The crystal factors of the three paths do not depend on the loop
/// settings, so the phase-averaged, `y`-integrated products
/// `<a_p a_q*>` are tabulated once per direction. Each intensity is then
/// `sum_pq M_pq <B_p B_q*>_k`, with the spectral average of the path factors
/// done by Gauss-Hermite quadrature.
#[derive(Debug, Clone)]
pub struct IntensityOracle {
    forward: Coherence,
    diffracted: Coherence,
    hermite: Rule,
}

impl IntensityOracle {
    pub fn new(q: &QuadratureConfig) -> Result<Self> {
        q.validate()?;
        let forward = coherence(q, PlateAmps::forward);
        let diffracted = coherence(q, PlateAmps::diffracted);
        Ok(Self {
            forward,
            diffracted,
            hermite: gauss_hermite(q.k_nodes)?,
        })
    }

    pub fn k0(&self, s: &LoopSettings, spec: &Spectrum) -> f64 {
        self.contract(&self.forward, s, spec)
    }

    pub fn kg(&self, s: &LoopSettings, spec: &Spectrum) -> f64 {
        self.contract(&self.diffracted, s, spec)
    }

    pub fn intensities(&self, s: &LoopSettings, spec: &Spectrum) -> IntensityPair {
        IntensityPair {
            k0_forward: self.k0(s, spec),
            kg_diffracted: self.kg(s, spec),
        }
    }

    fn contract(&self, m: &Coherence, s: &LoopSettings, spec: &Spectrum) -> f64 {
        let eps = spec.epsilon();
        let mut avg = [[ComplexAmp::new(0.0, 0.0); 3]; 3];
        for (&x, &w) in self.hermite.nodes.iter().zip(&self.hermite.weights) {
            let b = s.scaled_phases(1.0 + eps * SQRT_2 * x).path_factors();
            for p in 0..3 {
                for q in 0..3 {
                    avg[p][q] += b[p] * b[q].conj() * w;
                }
            }
        }
        let norm = PI.sqrt();
        let mut total = 0.0;
        for p in 0..3 {
            for q in 0..3 {
                total += (m[p][q] * avg[p][q]).re / norm;
            }
        }
        total
    }
}

fn coherence(q: &QuadratureConfig, paths: fn(&PlateAmps) -> [ComplexAmp; 3]) -> Coherence {
    let mut m = [[ComplexAmp::new(0.0, 0.0); 3]; 3];
    let y_rule = tan_substitution_rule(q.y_nodes);
    let n_phase = q.phase_samples;
    // weight of one phase sample folded into the y weight
    let phase_weight = 1.0 / n_phase as f64;
    for (&y, &wy) in y_rule.nodes.iter().zip(&y_rule.weights) {
        let w = wy * phase_weight;
        for j in 0..n_phase {
            let phase = 2.0 * PI * j as f64 / n_phase as f64;
            let (v0, vg) = plate_amplitudes_at_phase(y, phase);
            let (v0_neg, vg_neg) = plate_amplitudes_at_phase(-y, phase);
            let a = paths(&PlateAmps {
                v0,
                vg,
                v0_neg,
                vg_neg,
            });
            for p in 0..3 {
                for r in 0..3 {
                    m[p][r] += a[p] * a[r].conj() * w;
                }
            }
        }
    }
    m
}

/// Forward intensity by brute-force quadrature.
pub fn k0_oracle(s: &LoopSettings, spec: &Spectrum, q: &QuadratureConfig) -> Result<f64> {
    Ok(IntensityOracle::new(q)?.k0(s, spec))
}

/// Diffracted intensity by brute-force quadrature.
pub fn kg_oracle(s: &LoopSettings, spec: &Spectrum, q: &QuadratureConfig) -> Result<f64> {
    Ok(IntensityOracle::new(q)?.kg(s, spec))
}
