use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dloop_cli::verify::{DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOLERANCE};
use dloop_cli::{
    render_figure, run_sweep, run_verify, CliError, FigureId, OutputFormat, SweepSpec, SweepVar,
    Table, VerifyOptions, OUT_DIR_ENV,
};
use dloop_core::intensity::{intensities, QuadratureConfig, DEFAULT_EPSILON};
use dloop_core::visibility::{solve_balance_absorber, solve_unit_visibility_phase, AbsorptionMode};
use dloop_core::{LoopSettings, Spectrum};

#[derive(Parser)]
#[command(
    name = "dloop",
    version,
    about = "Intensities and fringe visibilities of a double-loop neutron interferometer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sto,
    Det,
}

impl From<Mode> for AbsorptionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Sto => AbsorptionMode::Stochastic,
            Mode::Det => AbsorptionMode::Deterministic,
        }
    }
}

#[derive(clap::Args)]
struct Output {
    /// Write to this file instead of stdout (or $DLOOP_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Data table of one figure.
    Figure {
        #[arg(long, value_enum)]
        id: FigureId,
        #[command(flatten)]
        output: Output,
    },
    /// Sweep one parameter and tabulate K0, KG and the visibility.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long = "var", value_enum)]
        variable: SweepVar,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0.0)]
        chi_d: f64,
        #[arg(long, default_value_t = 0.0)]
        chi_f: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha_d: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha_f: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        background: f64,
        #[arg(long, value_enum, default_value_t = Mode::Sto)]
        mode: Mode,
        #[command(flatten)]
        output: Output,
    },
    /// Closed-form K0 and KG for one setting.
    #[command(allow_negative_numbers = true)]
    Intensity {
        #[arg(long, default_value_t = 0.0)]
        chi_d: f64,
        #[arg(long, default_value_t = 0.0)]
        chi_f: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha_d: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha_f: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
    },
    /// Matching solvers.
    Solve {
        #[command(subcommand)]
        problem: Solve,
    },
    /// Oracle-equivalence and invariant checks.
    Verify {
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = QuadratureConfig::default().phase_samples)]
        phase_samples: usize,
        #[arg(long, default_value_t = QuadratureConfig::default().y_nodes)]
        y_nodes: usize,
        #[arg(long, default_value_t = QuadratureConfig::default().k_nodes)]
        k_nodes: usize,
    },
}

#[derive(Subcommand)]
enum Solve {
    /// Absorption in beam f that equalizes the mean K0 and KG levels.
    #[command(allow_negative_numbers = true)]
    Balance {
        #[arg(long, default_value_t = 0.0)]
        alpha_d: f64,
        #[arg(long, default_value_t = 0.0)]
        chi_d: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
    },
    /// Phase in beam f giving unit visibility for transmission T in beam d.
    #[command(allow_negative_numbers = true)]
    UnitVisibility {
        #[arg(long)]
        t: f64,
    },
}

fn emit(table: &Table, output: &Output) -> Result<(), CliError> {
    let text = table.render(output.format)?;
    let path = match (&output.out, std::env::var_os(OUT_DIR_ENV)) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => {
            let dir = PathBuf::from(dir);
            std::fs::create_dir_all(&dir)?;
            Some(dir.join(format!("{}.{}", table.name, output.format.extension())))
        }
        (None, None) => None,
    };
    match path {
        Some(p) => {
            std::fs::write(&p, text)?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Figure { id, output } => emit(&render_figure(id)?, &output)?,
        Command::Sweep {
            variable,
            from,
            to,
            steps,
            chi_d,
            chi_f,
            alpha_d,
            alpha_f,
            eps,
            background,
            mode,
            output,
        } => {
            let spec = SweepSpec {
                settings: LoopSettings::new(chi_d, chi_f, alpha_d, alpha_f)?,
                epsilon: eps,
                background,
                mode: mode.into(),
                ..SweepSpec::new(variable, from, to, steps)
            };
            emit(&run_sweep(&spec)?, &output)?;
        }
        Command::Intensity {
            chi_d,
            chi_f,
            alpha_d,
            alpha_f,
            eps,
        } => {
            let s = LoopSettings::new(chi_d, chi_f, alpha_d, alpha_f)?;
            let pair = intensities(&s, &Spectrum::new(eps)?);
            let mut t = Table::new("intensity", vec!["K0".into(), "KG".into()]);
            t.push(vec![pair.k0_forward, pair.kg_diffracted]);
            print!("{}", t.to_csv());
        }
        Command::Solve { problem } => match problem {
            Solve::Balance {
                alpha_d,
                chi_d,
                eps,
            } => {
                let alpha_f = solve_balance_absorber(alpha_d, chi_d, eps)?;
                println!("alpha_f,T_f");
                println!(
                    "{},{}",
                    dloop_cli::format_sig9(alpha_f),
                    dloop_cli::format_sig9((-2.0 * alpha_f).exp())
                );
            }
            Solve::UnitVisibility { t } => {
                let chi_f = solve_unit_visibility_phase(t)?;
                println!("chi_f");
                println!("{}", dloop_cli::format_sig9(chi_f));
            }
        },
        Command::Verify {
            tol,
            samples,
            seed,
            phase_samples,
            y_nodes,
            k_nodes,
        } => {
            let opts = VerifyOptions {
                tolerance: tol,
                samples,
                seed,
                quadrature: QuadratureConfig {
                    phase_samples,
                    y_nodes,
                    k_nodes,
                },
            };
            let report = run_verify(&opts)?;
            print!("{report}");
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
