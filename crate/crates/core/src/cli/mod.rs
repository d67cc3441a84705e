//! Batch front end: reads a system description, runs one command over a grid
//! and writes deterministic CSV or JSON artifacts.
//!
//! Exit codes: 0 success, 2 input error, 3 policy refusal, 4 numeric failure.

mod commands;
mod grid;
mod output;

pub use grid::{parse_complex, parse_complex_grid, parse_real_grid};
pub use output::config_hash;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::boundary::{TripleKind, DEFAULT_DISK_TOL};
use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_POLICY: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Policy(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) | Self::Io { .. } => EXIT_INPUT,
            Self::Policy(_) => EXIT_POLICY,
            Self::Library(e) => match e {
                Error::RankDeficientPair { .. }
                | Error::InvalidCoefficients(_)
                | Error::OutOfInterval { .. }
                | Error::NotRegular
                | Error::NotHalfLine
                | Error::UnsupportedDimension { .. }
                | Error::NotInHalfPlane { .. }
                | Error::InvalidInput(_) => EXIT_INPUT,
                _ => EXIT_NUMERIC,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Parser)]
#[command(
    name = "canspec",
    version,
    about = "Weyl functions, resolvent matrices and spectral functions of canonical systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// System description (JSON).
    #[arg(long, global = true)]
    pub system: Option<PathBuf>,
    /// Boundary triple: full, neumann or limit-point. Defaults to full for
    /// regular systems and limit-point for half-line systems.
    #[arg(long, global = true, value_parser = parse_triple)]
    pub triple: Option<TripleKind>,
    /// Spectral parameters `a:b:n` or a comma list of complex numbers.
    #[arg(long = "z-grid", global = true)]
    pub z_grid: Option<String>,
    /// Real grid `a:b:n`; its range is the spectral window and its spacing the step.
    #[arg(long = "lambda-grid", global = true)]
    pub lambda_grid: Option<String>,
    /// Parameter τ as inline JSON, e.g. `{"type":"constant","value":[[0]]}`.
    #[arg(long, global = true)]
    pub tau: Option<String>,
    /// Output path; artifacts go to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Emit σ even when τ is classified inadmissible.
    #[arg(long, global = true)]
    pub force: bool,
    /// Fail instead of skipping grid points on the spectrum.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Seed for generated test functions.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Radius tolerance for Weyl disks.
    #[arg(long, global = true, default_value_t = DEFAULT_DISK_TOL)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monodromy matrix U(b, z) over the z grid.
    Solve,
    /// Weyl function M(z) (or m(z) with its Weyl disk) over the z grid.
    Weyl,
    /// Resolvent matrix W(z) over the z grid.
    ResolventMatrix {
        /// Left or right matrix; defaults to the one native to the triple.
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Spectral function of the L-resolvent for τ, with its admissibility report.
    Spectral {
        /// Also run a Parseval check with a seeded test function.
        #[arg(long)]
        parseval: bool,
    },
    /// Parseval and Bessel checks for a seeded test function.
    FourierCheck,
    /// Indivisible intervals of a p = 1 system.
    Indivisible,
}

fn parse_triple(s: &str) -> std::result::Result<TripleKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parse `args` (including the program name), run the command and return
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn library_errors_map_to_exit_codes() {
        assert_eq!(CliError::from(Error::NotRegular).exit_code(), EXIT_INPUT);
        assert_eq!(
            CliError::from(Error::NoConvergence { lambda: 0.0, residual: 1.0 }).exit_code(),
            EXIT_NUMERIC
        );
        assert_eq!(CliError::Policy("p".into()).exit_code(), EXIT_POLICY);
    }
}
