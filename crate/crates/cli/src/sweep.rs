//! One-dimensional parameter sweeps.

use dloop_core::beamline::alpha_from_transmission;
use dloop_core::visibility::{visibility_double_phase, AbsorptionMode};
use dloop_core::{k0_closed, kg_closed, LoopSettings, Spectrum};

use crate::error::CliError;
use crate::table::{format_sig9, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepVar {
    #[value(name = "chi_d")]
    ChiD,
    #[value(name = "chi_f")]
    ChiF,
    #[value(name = "t_d")]
    TD,
    #[value(name = "alpha_d")]
    AlphaD,
    #[value(name = "alpha_f")]
    AlphaF,
    #[value(name = "i_incoh")]
    IIncoh,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::ChiD => "chi_d",
            SweepVar::ChiF => "chi_f",
            SweepVar::TD => "t_d",
            SweepVar::AlphaD => "alpha_d",
            SweepVar::AlphaF => "alpha_f",
            SweepVar::IIncoh => "i_incoh",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub settings: LoopSettings,
    pub epsilon: f64,
    pub background: f64,
    pub mode: AbsorptionMode,
}

impl SweepSpec {
    pub fn new(variable: SweepVar, from: f64, to: f64, steps: usize) -> Self {
        Self {
            variable,
            from,
            to,
            steps,
            settings: LoopSettings::empty(),
            epsilon: dloop_core::intensity::DEFAULT_EPSILON,
            background: 0.0,
            mode: AbsorptionMode::Stochastic,
        }
    }

    fn grid(&self) -> Result<Vec<f64>, CliError> {
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(CliError::Usage("sweep range must be finite".into()));
        }
        if !(self.from < self.to) {
            return Err(CliError::Usage(format!(
                "sweep range needs from < to, got {} .. {}",
                self.from, self.to
            )));
        }
        if self.steps < 2 {
            return Err(CliError::Usage(format!("steps must be >= 2, got {}", self.steps)));
        }
        let n = self.steps;
        let step = (self.to - self.from) / (n - 1) as f64;
        let xs: Vec<f64> = (0..n)
            .map(|i| if i + 1 == n { self.to } else { self.from + i as f64 * step })
            .collect();
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(CliError::Usage(format!(
                "sweep range {} .. {} is too narrow for {} distinct steps",
                self.from, self.to, n
            )));
        }
        Ok(xs)
    }
}

/// Evaluate `K0`, `KG` and the double-loop visibility along the sweep.
///
/// The visibility column uses the current `T_d`, `chi_f`, absorption mode and
/// background; points where it is undefined are written as NaN.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table, CliError> {
    let xs = spec.grid()?;
    Spectrum::new(spec.epsilon)?;
    if !(spec.background.is_finite() && spec.background >= 0.0) {
        return Err(CliError::Usage(format!(
            "background must be >= 0, got {}",
            spec.background
        )));
    }
    let base = spec.settings;
    let mode_name = match spec.mode {
        AbsorptionMode::Stochastic => "sto",
        AbsorptionMode::Deterministic => "det",
    };
    let fixed = format!(
        "chi_d={};chi_f={};alpha_d={};alpha_f={};eps={};I_incoh={};mode={}",
        format_sig9(base.chi_d()),
        format_sig9(base.chi_f()),
        format_sig9(base.alpha_d()),
        format_sig9(base.alpha_f()),
        format_sig9(spec.epsilon),
        format_sig9(spec.background),
        mode_name
    );
    let mut table = Table::new(
        format!("sweep-{}", spec.variable.name()),
        vec![
            spec.variable.name().to_string(),
            format!("K0[{fixed}]"),
            format!("KG[{fixed}]"),
            format!("V[{fixed}]"),
        ],
    );
    let spectrum = Spectrum::new(spec.epsilon)?;
    for x in xs {
        let (mut chi_d, mut chi_f, mut alpha_d, mut alpha_f) =
            (base.chi_d(), base.chi_f(), base.alpha_d(), base.alpha_f());
        let mut background = spec.background;
        match spec.variable {
            SweepVar::ChiD => chi_d = x,
            SweepVar::ChiF => chi_f = x,
            SweepVar::TD => alpha_d = alpha_from_transmission(x)?,
            SweepVar::AlphaD => alpha_d = x,
            SweepVar::AlphaF => alpha_f = x,
            SweepVar::IIncoh => background = x,
        }
        let s = LoopSettings::new(chi_d, chi_f, alpha_d, alpha_f)?;
        let v = visibility_double_phase(s.transmission_d(), chi_f, spec.mode, background)
            .unwrap_or(f64::NAN);
        table.push(vec![x, k0_closed(&s, &spectrum), kg_closed(&s, &spectrum), v]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dloop_core::visibility::{solve_unit_visibility_phase, visibility_double};

    #[test]
    fn t_sweep_reproduces_double_loop_curve() {
        let spec = SweepSpec::new(SweepVar::TD, 0.0, 1.0, 51);
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.rows.len(), 51);
        for row in &t.rows {
            let v = visibility_double(row[0], AbsorptionMode::Stochastic).unwrap();
            assert!((row[3] - v).abs() < 1e-12, "{row:?}");
        }
    }

    #[test]
    fn background_sweep_decreases_from_one() {
        let chi_f = solve_unit_visibility_phase(0.1).unwrap();
        let mut spec = SweepSpec::new(SweepVar::IIncoh, 0.0, 1.0, 21);
        spec.settings = LoopSettings::new(0.0, chi_f, alpha_from_transmission(0.1).unwrap(), 0.0)
            .unwrap();
        let t = run_sweep(&spec).unwrap();
        assert!((t.rows[0][3] - 1.0).abs() < 1e-12);
        assert!(t.rows.windows(2).all(|w| w[1][3] < w[0][3]));
    }

    #[test]
    fn degenerate_ranges_rejected() {
        for (from, to, steps) in [(1.0, 1.0, 2), (2.0, 1.0, 5), (0.0, 1.0, 1)] {
            let spec = SweepSpec::new(SweepVar::ChiD, from, to, steps);
            assert!(matches!(run_sweep(&spec), Err(CliError::Usage(_))));
        }
        let next = f64::from_bits(1.0f64.to_bits() + 1);
        let spec = SweepSpec::new(SweepVar::ChiD, 1.0, next, 3);
        assert!(matches!(run_sweep(&spec), Err(CliError::Usage(_))));
        assert!(run_sweep(&SweepSpec::new(SweepVar::ChiD, 1.0, next, 2)).is_ok());
    }

    #[test]
    fn out_of_domain_transmission_is_an_error() {
        let spec = SweepSpec::new(SweepVar::TD, 0.5, 1.5, 3);
        assert!(run_sweep(&spec).is_err());
    }
}
