//! `vlex`: batch front-end for norms, multiplier brackets, approximation
//! certificates and oracle suites.
//!
//! Exit codes: 0 success, 1 violations or failed checks, 2 parse errors,
//! 3 domain errors, 4 unmet approximation preconditions.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
    pub fn parse(message: impl Into<String>) -> Failure {
        Failure::new(2, message)
    }
    pub fn io(message: impl Into<String>) -> Failure {
        Failure::new(1, message)
    }
    pub fn violation(message: impl Into<String>) -> Failure {
        Failure::new(1, message)
    }
    /// Exit 2 for parse errors, 3 otherwise.
    pub fn domain(e: vlex_core::Error) -> Failure {
        Failure::classify(e, 3)
    }
    /// Exit 2 for parse errors, 4 otherwise.
    pub fn precondition(e: vlex_core::Error) -> Failure {
        Failure::classify(e, 4)
    }
    fn classify(e: vlex_core::Error, otherwise: u8) -> Failure {
        let code = if e.is_parse() { 2 } else { otherwise };
        Failure::new(code, e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Interpolation with `L²` bounded by the multiplier norm on `L^{p_θ(·)}`.
    A,
    /// Interpolation through a constant `L^{p₀}`, bounded by `‖a‖_V`.
    B,
}

#[derive(Debug, Parser)]
#[command(name = "vlex", version, about = "Fourier multipliers on variable Lebesgue spaces")]
pub struct Cli {
    /// Experiment config (JSON); unknown keys are rejected.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides every seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report directory [default: config `output`, else `reports`].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Luxemburg norm of a sampled function (CSV with header `t,re,im`).
    Norm { function: PathBuf },
    /// Bracket for the multiplier norm of a symbol (JSON spec).
    Mulnorm { symbol: PathBuf },
    /// Certified smooth compactly supported approximation of a vanishing symbol.
    Approximate {
        symbol: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_enum, default_value = "a")]
        mode: Mode,
    },
    /// Re-checks the stored arithmetic of a certificate.
    Replay { certificate: PathBuf },
    /// Property suite: embedding, mollification, Stechkin and interpolation checks.
    Suite,
    /// Cyclic-model operator norms and the interpolation corpus.
    Oracle { symbols: Vec<PathBuf> },
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("VLEX_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| Failure::parse(format!("VLEX_THREADS = `{v}` is not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::io(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    let mut cfg = config::ExperimentConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.reseed(seed);
    }
    let out = cli.out.clone().or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("reports"));
    let ctx = commands::Context { cfg, out, format: cli.format };
    match cli.command {
        Command::Norm { function } => commands::norm(&ctx, &function),
        Command::Mulnorm { symbol } => commands::mulnorm(&ctx, &symbol),
        Command::Approximate { symbol, epsilon, mode } => commands::approximate(&ctx, &symbol, epsilon, mode),
        Command::Replay { certificate } => commands::replay(&ctx, &certificate),
        Command::Suite => commands::suite(&ctx),
        Command::Oracle { symbols } => commands::oracle(&ctx, &symbols),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("vlex: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
