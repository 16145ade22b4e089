//! `subradiance` command-line driver: configuration, dispatch and output files.

// Guards like `!(x > 0.0)` are written to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod defaults;
pub mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use subradiance_core::experiments::FigureId;
use subradiance_core::verify::VerifyOptions;
use thiserror::Error;

use config::{resolve, CommandKind, ConfigError, Layers, Origin, RunConfig, WORKERS_ENV};
use manifest::RunManifest;

pub use commands::verify_command;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("invalid parameters: {0}")]
    Invalid(subradiance_core::Error),
    #[error("solver error: {0}")]
    Solver(subradiance_core::Error),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl From<subradiance_core::Error> for CliError {
    fn from(e: subradiance_core::Error) -> Self {
        use subradiance_core::Error as E;
        match e {
            E::Io { path, message } => CliError::Io { path, message },
            E::Argument { .. } => CliError::Invalid(e),
            _ => CliError::Solver(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Invalid(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "subradiance",
    version,
    about = "Subradiant spectra of atom chains coupled to a waveguide",
    after_help = defaults::help_table()
)]
pub struct Cli {
    /// Config file with [section] key = value lines; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Repeat for more log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full spectrum of one chain plus branch comparison rows.
    #[command(after_help = defaults::help_table())]
    Spectrum(GridArgs),
    /// Numeric vs closed-form observables over an (N, d, γ, ξ) grid.
    #[command(after_help = defaults::help_table())]
    Sweep(GridArgs),
    /// Regenerate the CSV and SVG panels of one figure.
    Figure {
        #[arg(value_parser = parse_figure)]
        id: FigureId,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the internal identity suite and print a pass/fail table.
    Verify {
        /// Reduced grids; finishes in a few seconds.
        #[arg(long)]
        quick: bool,
        /// Seed for the random sum-rule instances.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Power-law fits of one observable of a sweep CSV against N.
    Fit(FitArgs),
}

fn parse_figure(s: &str) -> Result<FigureId, String> {
    s.parse().map_err(|e: subradiance_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Atom numbers: list and/or ranges, e.g. 20:200:5
    #[arg(long)]
    pub n: Option<String>,
    /// Spacings d/λ
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    /// Free-space rates γ/Γ
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Branch indices ξ
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eig_tol: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub workers: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<String>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Sweep CSV to read
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub column: Option<String>,
    /// Inclusive N window lo:hi
    #[arg(long)]
    pub window: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<String>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
}

impl RunArgs {
    fn overrides(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("solver.eig_tol", &self.eig_tol),
            ("solver.workers", &self.workers),
            ("output.dir", &self.out),
            ("output.format", &self.format),
        ]
    }
}

impl Command {
    fn kind(&self) -> CommandKind {
        match self {
            Command::Spectrum(_) => CommandKind::Spectrum,
            Command::Sweep(_) => CommandKind::Sweep,
            Command::Figure { id, .. } => CommandKind::Figure { id: *id },
            Command::Verify { quick, .. } => CommandKind::Verify { quick: *quick },
            Command::Fit(_) => CommandKind::Fit,
        }
    }

    fn overrides(&self) -> Vec<(&'static str, &Option<String>)> {
        match self {
            Command::Spectrum(g) | Command::Sweep(g) => {
                let mut v = vec![
                    ("chain.n", &g.n),
                    ("chain.d", &g.d),
                    ("chain.gamma", &g.gamma),
                    ("chain.xi", &g.xi),
                ];
                v.extend(g.run.overrides());
                v
            }
            Command::Figure { run, .. } => run.overrides(),
            Command::Verify { .. } => Vec::new(),
            Command::Fit(f) => vec![
                ("fit.input", &f.input),
                ("fit.column", &f.column),
                ("fit.window", &f.window),
                ("output.dir", &f.out),
                ("output.format", &f.format),
            ],
        }
    }
}

/// Layer defaults, the worker environment variable, the config file and the
/// flags, then validate.
pub fn build_config(cli: &Cli, env_workers: Option<String>) -> Result<RunConfig, ConfigError> {
    let mut layers = Layers::with_defaults();
    layers.apply_env(env_workers)?;
    if let Some(path) = &cli.config {
        layers.apply_file(path)?;
    }
    for (key, value) in cli.command.overrides() {
        if let Some(v) = value {
            layers.set(key, v, Origin::Flag)?;
        }
    }
    resolve(cli.command.kind(), &layers)
}

fn dispatch(cli: &Cli, cfg: &RunConfig, argv: Vec<String>) -> Result<i32, CliError> {
    let manifest = RunManifest::new(cfg, argv);
    match &cli.command {
        Command::Spectrum(_) => commands::spectrum(cfg, manifest)?,
        Command::Sweep(_) => commands::sweep(cfg, manifest)?,
        Command::Figure { id, .. } => commands::figure(cfg, *id, manifest)?,
        Command::Fit(_) => commands::fit(cfg, manifest)?,
        Command::Verify { quick, seed } => {
            let mut opts = VerifyOptions {
                quick: *quick,
                ..Default::default()
            };
            if let Some(s) = seed {
                opts.seed = *s;
            }
            return Ok(verify_command(&opts, &mut std::io::stdout().lock()));
        }
    }
    Ok(EXIT_OK)
}

/// Parse `args`, run the command and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();

    let cfg = match build_config(&cli, std::env::var(WORKERS_ENV).ok()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("Error: {e}");
            return EXIT_CONFIG;
        }
    };
    let argv = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(&cli, &cfg, argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("Error: {e}");
            e.exit_code()
        }
    }
}
