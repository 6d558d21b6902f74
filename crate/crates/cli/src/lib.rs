//! Command-line front end for the double-loop interferometer model: figure
//! tables, parameter sweeps and the oracle verification suite.

pub mod error;
pub mod figure;
pub mod sweep;
pub mod table;
pub mod verify;

pub use error::CliError;
pub use figure::{render_figure, FigureId};
pub use sweep::{run_sweep, SweepSpec, SweepVar};
pub use table::{format_sig9, OutputFormat, Table};
pub use verify::{run_verify, Report, VerifyOptions};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DLOOP_OUT_DIR";
