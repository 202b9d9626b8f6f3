//! `papt`: dataset generation for the two-mode squeezing model.
//!
//! Each command reads an optional TOML or JSON config, runs one family of
//! computations and writes CSV or JSON files into the output directory. Every
//! file starts with a metadata header carrying the config hash, the seed and the
//! crate versions; reruns with the same config and seed are byte-identical.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use clap::{Parser, ValueEnum};
pub use config::RunConfig;
pub use error::CliError;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Squeezing factor versus time and versus coupling.
    Fig1,
    /// Susceptibility, inverse error, QFI and amplitude sweep.
    Fig2,
    /// Truncated Fock-space traces with and without Kerr interaction.
    Fock,
    /// Ring-condensate trajectory, sensing sweep and density profiles.
    Bec,
    /// Sensitivity report and Monte-Carlo estimate at one configuration.
    Sense,
    /// Four-wave-mixing parameters mapped onto the model.
    Platform,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Fig1 => "fig1",
            Command::Fig2 => "fig2",
            Command::Fock => "fock",
            Command::Bec => "bec",
            Command::Sense => "sense",
            Command::Platform => "platform",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "papt",
    version,
    about = "Datasets for pseudo-anti-PT two-mode squeezing and sensing"
)]
pub struct Args {
    pub command: Command,
    /// TOML config, or JSON when the file ends in `.json`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Overrides the `seed` key of the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for sweeps; defaults to the number of cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

pub fn run(args: &Args) -> Result<(), CliError> {
    let mut cfg = match &args.config {
        Some(path) => config::load(path)?,
        None => RunConfig::default(),
    };
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    cfg.seed = Some(seed);
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        // A second call in the same process keeps the existing pool.
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::debug!("thread pool already configured: {e}");
        }
    }
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::Io(format!("{}: {e}", args.out.display())))?;
    let meta = output::Meta::new(args.command.name(), &cfg)?;
    log::info!("{} with seed {seed}, config {}", meta.command, meta.config_sha256);
    match args.command {
        Command::Fig1 => commands::fig1::run(&cfg.fig1, &meta, &args.out),
        Command::Fig2 => commands::fig2::run(&cfg.fig2, &meta, &args.out),
        Command::Fock => commands::fock::run(&cfg.fock, &meta, &args.out),
        Command::Bec => commands::bec::run(&cfg.bec, &meta, &args.out),
        Command::Sense => commands::sense::run(&cfg.sense, seed, &meta, &args.out),
        Command::Platform => commands::platform::run(cfg.fwm, &meta, &args.out),
    }
}
