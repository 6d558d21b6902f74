//! Oracle-equivalence and invariant checks, reported as worst-case errors.

use std::f64::consts::{PI, TAU};
use std::fmt;

use dloop_core::crystal::{diffract_amp, transmit_amp, CrystalParams};
use dloop_core::intensity::{IntensityOracle, QuadratureConfig};
use dloop_core::quadrature::damped_period_mean;
use dloop_core::visibility::{
    solve_balance_absorber, solve_unit_visibility_phase, visibility_double_phase,
    visibility_numeric, AbsorptionMode,
};
use dloop_core::{k0_closed, kg_closed, path_factor, LoopSettings, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 20_050_301;
pub const DEFAULT_TOLERANCE: f64 = 1e-5;
pub const DEFAULT_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub tolerance: f64,
    pub samples: usize,
    pub seed: u64,
    pub quadrature: QuadratureConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            quadrature: QuadratureConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    /// Where the worst error occurred.
    pub worst_case: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn worst(&self) -> f64 {
        self.checks.iter().map(|c| c.worst).fold(0.0, f64::max)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            write!(
                f,
                "{status} {:<24} worst {:>10.3e}  tol {:.1e}",
                c.name, c.worst, c.tolerance
            )?;
            if !c.passed() {
                write!(f, "  at {}", c.worst_case)?;
            }
            writeln!(f)?;
        }
        let summary = if self.passed() { "all checks passed" } else { "FAILED" };
        writeln!(f, "{summary}; worst error {:.3e}", self.worst())
    }
}

struct Tracker {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    worst_case: String,
}

impl Tracker {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: 0.0,
            worst_case: String::new(),
        }
    }

    fn record(&mut self, err: f64, case: impl FnOnce() -> String) {
        // NaN counts as the worst possible outcome
        let err = if err.is_nan() { f64::INFINITY } else { err };
        if err > self.worst || self.worst_case.is_empty() {
            self.worst = self.worst.max(err);
            self.worst_case = case();
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            worst: self.worst,
            tolerance: self.tolerance,
            worst_case: self.worst_case,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn random_settings(rng: &mut ChaCha8Rng) -> Result<(LoopSettings, Spectrum), CliError> {
    let alpha = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.1) {
            f64::INFINITY
        } else {
            rng.gen_range(0.0..3.0)
        }
    };
    let chi_d = rng.gen_range(0.0..TAU);
    let chi_f = rng.gen_range(0.0..TAU);
    let alpha_d = alpha(rng);
    let alpha_f = alpha(rng);
    let eps = [0.0, 0.01, 0.05][rng.gen_range(0..3)];
    Ok((
        LoopSettings::new(chi_d, chi_f, alpha_d, alpha_f)?,
        Spectrum::new(eps)?,
    ))
}

/// Run every check. Failing checks are reported, not returned as errors.
pub fn run_verify(opts: &VerifyOptions) -> Result<Report, CliError> {
    if !(opts.tolerance.is_finite() && opts.tolerance > 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be > 0, got {}",
            opts.tolerance
        )));
    }
    let tol = opts.tolerance;
    let oracle = IntensityOracle::new(&opts.quadrature)?;
    let mut checks = Vec::new();

    let empty = LoopSettings::empty();
    let blocked = LoopSettings::new(0.0, 0.0, f64::INFINITY, f64::INFINITY)?;
    let spec = Spectrum::default();
    let mut constants = Tracker::new("closed-form-constants", tol);
    for (label, value, expected) in [
        ("K0(empty)", k0_closed(&empty, &spec), 711.0),
        ("KG(empty)", kg_closed(&empty, &spec), 361.0),
        ("K0(blocked)", k0_closed(&blocked, &spec), 79.0),
        ("KG(blocked)", kg_closed(&blocked, &spec), 65.0),
    ] {
        constants.record(rel(value, expected * PI / 2048.0), || label.to_string());
    }
    checks.push(constants.finish());

    let mut single = Tracker::new("oracle-single-path", tol);
    single.record(rel(oracle.k0(&blocked, &spec), 79.0 * PI / 2048.0), || {
        "K0(blocked)".into()
    });
    single.record(rel(oracle.kg(&blocked, &spec), 65.0 * PI / 2048.0), || {
        "KG(blocked)".into()
    });
    single.record(rel(oracle.k0(&empty, &spec), 711.0 * PI / 2048.0), || {
        "K0(empty)".into()
    });
    single.record(rel(oracle.kg(&empty, &spec), 361.0 * PI / 2048.0), || {
        "KG(empty)".into()
    });
    checks.push(single.finish());

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut forward = Tracker::new("oracle-forward", tol);
    let mut diffracted = Tracker::new("oracle-diffracted", tol);
    for _ in 0..opts.samples {
        let (s, spectrum) = random_settings(&mut rng)?;
        let case = || format!("{s:?}, eps {}", spectrum.epsilon());
        forward.record(rel(oracle.k0(&s, &spectrum), k0_closed(&s, &spectrum)), case);
        diffracted.record(rel(oracle.kg(&s, &spectrum), kg_closed(&s, &spectrum)), case);
    }
    checks.push(forward.finish());
    checks.push(diffracted.finish());

    let mut unitarity = Tracker::new("unitarity", tol);
    for abar in [0.1, 1.0, PI, 100.0] {
        let p = CrystalParams::from_abar(abar)?;
        for i in 0..=1000 {
            let y = -50.0 + 0.1 * i as f64;
            let sum = transmit_amp(y, &p).norm_sqr() + diffract_amp(y, &p).norm_sqr();
            unitarity.record((sum - 1.0).abs(), || format!("abar {abar}, y {y}"));
        }
    }
    checks.push(unitarity.finish());

    let mut reduction = Tracker::new("monochromatic-reduction", tol);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9);
    for _ in 0..opts.samples {
        let (s, _) = random_settings(&mut rng)?;
        let bracket = path_factor(s.chi_f(), s.alpha_f())?
            + path_factor(s.chi_d(), s.alpha_d())?
            + 1.0;
        let expected = 79.0 * PI / 2048.0 * bracket.norm_sqr();
        let closed = k0_closed(&s, &Spectrum::monochromatic());
        reduction.record((closed - expected).abs(), || format!("{s:?}"));
    }
    checks.push(reduction.finish());

    let mut scan = Tracker::new("scan-vs-formula", tol);
    for t_d in [0.05, 0.3, 0.8, 1.0] {
        for j in 0..16 {
            let chi_f = PI * j as f64 / 16.0;
            let numeric = visibility_numeric(chi_f, t_d, 0.0, false)?;
            let formula = visibility_double_phase(t_d, chi_f, AbsorptionMode::Stochastic, 0.0)?;
            scan.record((numeric.value - formula).abs(), || {
                format!("T_d {t_d}, chi_f {chi_f}")
            });
            let d = (numeric.argmax_chi_d - chi_f / 2.0).rem_euclid(TAU);
            scan.record(d.min(TAU - d), || format!("argmax at T_d {t_d}, chi_f {chi_f}"));
        }
    }
    checks.push(scan.finish());

    let mut balance = Tracker::new("balance-closure", tol);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1));
    for _ in 0..opts.samples.min(20) {
        let alpha_d = rng.gen_range(0.0..3.0);
        let chi_d = rng.gen_range(0.0..TAU);
        let eps = [0.0, 0.01, 0.05][rng.gen_range(0..3)];
        let Ok(alpha_f) = solve_balance_absorber(alpha_d, chi_d, eps) else {
            continue;
        };
        let spectrum = Spectrum::new(eps)?;
        let at = |chi_f: f64| LoopSettings::new(chi_d, chi_f, alpha_d, alpha_f);
        let mut failed = None;
        let mut eval = |f: fn(&LoopSettings, &Spectrum) -> f64| {
            damped_period_mean(eps, |x| match at(x) {
                Ok(s) => f(&s, &spectrum),
                Err(e) => {
                    failed = Some(e);
                    f64::NAN
                }
            })
        };
        let k0 = eval(k0_closed)?;
        let kg = eval(kg_closed)?;
        if let Some(e) = failed {
            return Err(e.into());
        }
        balance.record(rel(k0, kg), || {
            format!("alpha_d {alpha_d}, chi_d {chi_d}, eps {eps}")
        });
    }
    checks.push(balance.finish());

    let mut unit = Tracker::new("unit-visibility", tol);
    for t_d in [0.01, 0.1, 0.5, 1.0] {
        let chi_f = solve_unit_visibility_phase(t_d)?;
        let r = visibility_numeric(chi_f, t_d, 0.0, false)?;
        unit.record(1.0 - r.value, || format!("T_d {t_d}"));
    }
    checks.push(unit.finish());

    Ok(Report { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes() {
        let report = run_verify(&VerifyOptions::default()).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.worst() < 1e-5);
    }

    #[test]
    fn coarse_config_fails_tight_tolerance() {
        let opts = VerifyOptions {
            tolerance: 1e-12,
            samples: 10,
            quadrature: QuadratureConfig {
                phase_samples: 4,
                y_nodes: 3,
                k_nodes: 3,
            },
            ..Default::default()
        };
        let report = run_verify(&opts).unwrap();
        assert!(!report.passed());
        let failing = report.check("oracle-forward").unwrap();
        assert!(!failing.passed());
        assert!(!failing.worst_case.is_empty());
        assert!(report.to_string().contains("FAIL"));
    }

    #[test]
    fn seeded_runs_repeat() {
        let opts = VerifyOptions {
            samples: 20,
            ..Default::default()
        };
        assert_eq!(run_verify(&opts).unwrap(), run_verify(&opts).unwrap());
    }

    #[test]
    fn nonpositive_tolerance_rejected() {
        let opts = VerifyOptions {
            tolerance: 0.0,
            ..Default::default()
        };
        assert!(matches!(run_verify(&opts), Err(CliError::Usage(_))));
    }
}
