//! `liouville` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 on a certification failure,
//! 2 on an input error. Results are computed in full before anything is
//! written, so an input error never leaves a partial output file behind.

pub mod commands;
pub mod model_file;
pub mod state;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use liouville_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "liouville",
    version,
    about = "Lindblad generator spectra, channels and certification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Liouvillian eigenvalues as CSV plus a JSON summary.
    Spectrum(SpectrumArgs),
    /// Run certification suites and emit a JSON report.
    Verify(VerifyArgs),
    /// Lie–Trotter evolution of an initial state, as a CSV trajectory.
    Evolve(EvolveArgs),
    /// CPTP, unit-disk and contractivity checks of the exact channel.
    Channel(ChannelArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    pub model: PathBuf,
    /// CSV destination; stdout when absent (the summary then goes to stderr).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Classification tolerance; defaults to 1e-9·max(1, ‖S‖_F).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub model: PathBuf,
    #[arg(long)]
    pub lemma1: bool,
    #[arg(long)]
    pub lemma2: bool,
    #[arg(long)]
    pub chain: bool,
    #[arg(long)]
    pub cptp: bool,
    #[arg(long)]
    pub contractivity: bool,
    /// Every suite; also the behaviour when no suite is selected.
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Overrides the per-check default tolerances.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Haar-random bases for the Kossakowski check.
    #[arg(long, default_value_t = 10)]
    pub bases: usize,
    /// Random operators A for the dissipation-ordering check.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    /// Random density pairs for the contractivity check.
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
    /// Channel time for the CPTP and contractivity suites.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    pub model: PathBuf,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// `basis:K`, `maximally_mixed`, `random:SEED` or a JSON matrix file.
    #[arg(long, default_value = "maximally_mixed")]
    pub rho0: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Truncation tolerance for the Taylor Kraus factors.
    #[arg(long, default_value_t = 1e-12)]
    pub taylor_tol: f64,
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    pub model: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Failure,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Input,
            message: message.into(),
        }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Failure,
            message: message.into(),
        }
    }

    pub fn from_core(e: Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::NotSquare { .. }
            | Error::NotHermitian { .. } => Self::input(e.to_string()),
            _ => Self::failure(e.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => 2,
            ErrorKind::Failure => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Runs one command; `Ok(true)` when every check passed.
pub fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Evolve(a) => commands::evolve(&a),
        Command::Channel(a) => commands::channel(&a),
    }
}
