//! Configuration-driven front end.
//!
//! Every command loads an [`ExperimentConfig`] (TOML, unknown keys rejected), validates it
//! completely, and only then creates the output directory and computes. Exit code 2 marks
//! invalid input, 1 a failed computation.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_bounds, cmd_filters, cmd_kernel_decay, cmd_ly_verify, cmd_pressure, cmd_report,
    cmd_spectrum,
};
pub use config::{
    AxisSpec, BesovSection, BoundsSection, CorpusSection, ExperimentConfig, KernelSection,
    PressureSection, SpectrumSection, Validated, DEFAULT_OUT,
};

use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "besov-lab", version, about = "Transfer operators of expanding circle maps on Besov spaces")]
pub struct Cli {
    /// TOML experiment configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed of random corpora (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Suppress the summary on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Filter profiles and partition-of-unity residuals.
    Filters,
    /// Essential-radius bound against the pressure bound.
    Bounds,
    /// Truncated spectra and truncation-stable eigenvalues.
    Spectrum,
    /// Lasota-Yorke block estimates on a corpus.
    LyVerify,
    /// Local kernel decay tables.
    KernelDecay,
    /// Periodic-orbit pressure.
    Pressure,
    /// All of the above plus report.json.
    Report,
}

/// Loads, overrides and validates the configuration named on the command line.
pub fn prepare(cli: &Cli) -> Result<Validated> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    cfg.validate()
}

pub fn execute(command: Command, v: &Validated) -> Result<serde_json::Value> {
    std::fs::create_dir_all(&v.out)?;
    let out = v.out.as_path();
    match command {
        Command::Filters => cmd_filters(v, out),
        Command::Bounds => cmd_bounds(v, out),
        Command::Spectrum => cmd_spectrum(v, out),
        Command::LyVerify => cmd_ly_verify(v, out),
        Command::KernelDecay => cmd_kernel_decay(v, out),
        Command::Pressure => cmd_pressure(v, out),
        Command::Report => cmd_report(v, out),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        2
    } else {
        1
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = prepare(&cli).and_then(|v| execute(cli.command, &v).map(|s| (v, s)));
    match result {
        Ok((v, summary)) => {
            if !cli.quiet {
                println!("{}", serde_json::to_string_pretty(&summary).unwrap_or_default());
                println!("output: {}", v.out.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
