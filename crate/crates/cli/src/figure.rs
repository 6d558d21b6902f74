//! Data tables behind each figure.
//!
//! Phase axes are the dimensionless products `chi = Delta * k0` (radians).

use std::f64::consts::{PI, TAU};

use dloop_core::beamline::alpha_from_transmission;
use dloop_core::intensity::DEFAULT_EPSILON;
use dloop_core::visibility::{
    solve_balance_absorber, solve_unit_visibility_phase, visibility_double,
    visibility_double_phase, visibility_single, AbsorptionMode,
};
use dloop_core::{k0_closed, kg_closed, LoopSettings, Spectrum};

use crate::error::CliError;
use crate::table::{format_sig9, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8a,
    Fig8b,
    Fig8c,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8a,
        FigureId::Fig8b,
        FigureId::Fig8c,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8a => "fig8a",
            FigureId::Fig8b => "fig8b",
            FigureId::Fig8c => "fig8c",
        }
    }
}

impl std::str::FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown figure id '{s}'")))
    }
}

/// Half-width of the `chi_f` window of the intensity-vs-`chi_f` figures, in
/// periods. The window is symmetric so the damped fringes cancel in the
/// column means.
pub const CHI_F_HALF_PERIODS: usize = 100;
/// Samples per `2 pi` on the intensity-vs-`chi_f` axis.
pub const CHI_F_SAMPLES_PER_PERIOD: usize = 16;
/// Rows of the intensity-vs-`chi_d` figures, endpoints included.
pub const CHI_D_ROWS: usize = 1001;
/// Rows of the visibility-vs-transmission figures.
pub const T_ROWS: usize = 101;
/// Rows of the visibility-vs-phase figure.
pub const PHASE_ROWS: usize = 181;
/// Transmissions of the matched parameter families in figures 5-7.
pub const FAMILY_TRANSMISSIONS: [f64; 4] = [0.1, 0.25, 0.5, 1.0];
/// Second-loop phase used for the matched weak-signal figure.
pub const FIG8C_CHI_F: f64 = 2.824;

fn linspace(from: f64, to: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (to - from) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { to } else { from + i as f64 * step })
}

fn g(x: f64) -> String {
    format_sig9(x)
}

fn intensity_columns(x: &str, params: &str) -> Vec<String> {
    vec![x.to_string(), format!("K0[{params}]"), format!("KG[{params}]")]
}

fn intensity_vs_chi_f(name: &str, alpha_f: f64) -> Result<Table, CliError> {
    let eps = DEFAULT_EPSILON;
    let spec = Spectrum::new(eps)?;
    let params = format!("alpha_d=0;alpha_f={};chi_d=0;eps={}", g(alpha_f), g(eps));
    let mut t = Table::new(name, intensity_columns("chi_f", &params));
    let half = CHI_F_HALF_PERIODS * CHI_F_SAMPLES_PER_PERIOD;
    let step = TAU / CHI_F_SAMPLES_PER_PERIOD as f64;
    for j in -(half as i64)..=(half as i64) {
        let chi_f = j as f64 * step;
        let s = LoopSettings::new(0.0, chi_f, 0.0, alpha_f)?;
        t.push(vec![chi_f, k0_closed(&s, &spec), kg_closed(&s, &spec)]);
    }
    Ok(t)
}

fn intensity_vs_chi_d(name: &str, t_d: f64, chi_f: f64) -> Result<Table, CliError> {
    let spec = Spectrum::monochromatic();
    let alpha_d = alpha_from_transmission(t_d)?;
    let params = format!("T_d={};chi_f={};alpha_f=0;eps=0", g(t_d), g(chi_f));
    let mut t = Table::new(name, intensity_columns("chi_d", &params));
    for chi_d in linspace(0.0, TAU, CHI_D_ROWS) {
        let s = LoopSettings::new(chi_d, chi_f, alpha_d, 0.0)?;
        t.push(vec![chi_d, k0_closed(&s, &spec), kg_closed(&s, &spec)]);
    }
    Ok(t)
}

fn matched_family() -> Result<Vec<(f64, f64)>, CliError> {
    FAMILY_TRANSMISSIONS
        .iter()
        .map(|&t| Ok((t, solve_unit_visibility_phase(t)?)))
        .collect()
}

fn phase_visibility_vs_t(name: &str, mode: AbsorptionMode, label: &str) -> Result<Table, CliError> {
    let family = matched_family()?;
    let mut columns = vec!["T_d".to_string()];
    columns.extend(
        family
            .iter()
            .map(|&(_, chi_f)| format!("{label}[chi_f={};I_incoh=0]", g(chi_f))),
    );
    let mut t = Table::new(name, columns);
    for t_d in linspace(0.0, 1.0, T_ROWS) {
        let mut row = vec![t_d];
        for &(_, chi_f) in &family {
            row.push(visibility_double_phase(t_d, chi_f, mode, 0.0)?);
        }
        t.push(row);
    }
    Ok(t)
}

/// Build the table of one figure with the parameters of its caption.
pub fn render_figure(id: FigureId) -> Result<Table, CliError> {
    use AbsorptionMode::{Deterministic as Det, Stochastic as Sto};
    match id {
        FigureId::Fig2 => intensity_vs_chi_f(id.name(), 0.0),
        FigureId::Fig3 => {
            let alpha_f = solve_balance_absorber(0.0, 0.0, DEFAULT_EPSILON)?;
            intensity_vs_chi_f(id.name(), alpha_f)
        }
        FigureId::Fig4 => {
            let mut t = Table::new(
                id.name(),
                ["T_d", "V_sto1", "V_det1", "V_sto2", "V_det2"]
                    .map(String::from)
                    .to_vec(),
            );
            for t_d in linspace(0.0, 1.0, T_ROWS) {
                t.push(vec![
                    t_d,
                    visibility_single(t_d, Sto)?,
                    visibility_single(t_d, Det)?,
                    visibility_double(t_d, Sto)?,
                    visibility_double(t_d, Det)?,
                ]);
            }
            Ok(t)
        }
        FigureId::Fig5 => phase_visibility_vs_t(id.name(), Sto, "V_sto2"),
        FigureId::Fig6 => {
            let mut columns = vec!["chi_f".to_string()];
            columns.extend(
                FAMILY_TRANSMISSIONS
                    .iter()
                    .map(|&t| format!("V_sto2[T_d={};I_incoh=0]", g(t))),
            );
            let mut t = Table::new(id.name(), columns);
            for chi_f in linspace(0.0, PI, PHASE_ROWS) {
                let mut row = vec![chi_f];
                for &t_d in &FAMILY_TRANSMISSIONS {
                    row.push(visibility_double_phase(t_d, chi_f, Sto, 0.0)?);
                }
                t.push(row);
            }
            Ok(t)
        }
        FigureId::Fig7 => phase_visibility_vs_t(id.name(), Det, "V_det2"),
        FigureId::Fig8a => intensity_vs_chi_d(id.name(), 1.0, 0.0),
        FigureId::Fig8b => intensity_vs_chi_d(id.name(), 0.1, 0.0),
        FigureId::Fig8c => intensity_vs_chi_d(id.name(), 0.1, FIG8C_CHI_F),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean(it: impl Iterator<Item = f64>) -> f64 {
        let v: Vec<f64> = it.collect();
        v.iter().sum::<f64>() / v.len() as f64
    }

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.name().parse::<FigureId>().unwrap(), id);
        }
        assert!(matches!("fig9".parse::<FigureId>(), Err(CliError::Usage(_))));
    }

    #[test]
    fn fig2_at_zero_phase() {
        let t = render_figure(FigureId::Fig2).unwrap();
        let row = t.rows.iter().find(|r| r[0] == 0.0).unwrap();
        assert!((row[1] - 711.0 * PI / 2048.0).abs() < 1e-12);
        assert!((row[2] - 361.0 * PI / 2048.0).abs() < 1e-12);
        assert!(mean(t.column(1)) < mean(t.column(2)));
    }

    #[test]
    fn fig3_levels_equal() {
        let t = render_figure(FigureId::Fig3).unwrap();
        let (k0, kg) = (mean(t.column(1)), mean(t.column(2)));
        assert!((k0 - kg).abs() < 1e-6, "{k0} vs {kg}");
        assert!(t.columns[1].contains("alpha_f=0.898"));
    }

    #[test]
    fn fig4_endpoints() {
        let t = render_figure(FigureId::Fig4).unwrap();
        let last = t.rows.last().unwrap();
        assert_eq!(last[0], 1.0);
        assert_eq!(&last[1..3], &[1.0, 1.0]);
        assert!((last[3] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn fig5_peaks_on_matching_curve() {
        let t = render_figure(FigureId::Fig5).unwrap();
        for (col, &t_match) in FAMILY_TRANSMISSIONS.iter().enumerate() {
            let row = t.rows.iter().find(|r| (r[0] - t_match).abs() < 1e-12).unwrap();
            assert!((row[col + 1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fig7_below_one() {
        let t = render_figure(FigureId::Fig7).unwrap();
        for row in &t.rows {
            if row[0] < 1.0 {
                assert!(row[1..].iter().all(|&v| v < 1.0));
            }
        }
    }

    #[test]
    fn fig8c_minimum_vanishes() {
        let t = render_figure(FigureId::Fig8c).unwrap();
        let min = t.column(1).fold(f64::INFINITY, f64::min);
        assert!(min <= 1e-6, "{min}");
        let b = render_figure(FigureId::Fig8b).unwrap();
        let min_b = b.column(1).fold(f64::INFINITY, f64::min);
        assert!(min_b > 1e-3);
    }

    #[test]
    fn rendering_is_deterministic() {
        for id in FigureId::ALL {
            let a = render_figure(id).unwrap().to_csv();
            let b = render_figure(id).unwrap().to_csv();
            assert_eq!(a, b);
        }
    }
}
