//! `wradius`: weighted numerical radii, range clouds, inequality
//! verification, index estimates and searches from the command line.

mod commands;
mod config;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::RunConfig;
use failure::Failure;

#[derive(Parser)]
#[command(name = "wradius", version, about = "Weighted numerical radius toolkit")]
struct Cli {
    /// TOML file with default values for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seminorm, adjoint, radii, spectral radius and distance to scalars of one element.
    Compute(Flags),
    /// Numerical range point cloud as CSV.
    Range(Flags),
    /// Run the inequality suite and write a JSON report.
    Verify(Flags),
    /// Estimate the numerical index of the weighted algebra.
    Index(Flags),
    /// Tightness or κ-ratio search.
    Search {
        #[arg(value_enum)]
        mode: SearchKind,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchKind {
    Tightness,
    Kappa,
}

#[derive(Args, Default, Clone)]
struct Flags {
    /// Weight matrix (JSON).
    #[arg(long)]
    weight: Option<PathBuf>,
    /// Element matrix (JSON).
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Trials per ensemble kind and checker.
    #[arg(long)]
    trials: Option<usize>,
    /// Chain tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// full, lower-triangular, upper-triangular or diagonal.
    #[arg(long)]
    subalgebra: Option<String>,
    #[arg(long)]
    budget: Option<usize>,
    /// Comma-separated checker ids.
    #[arg(long, value_delimiter = ',')]
    checkers: Option<Vec<String>>,
    /// Ensemble kind for searches.
    #[arg(long)]
    kind: Option<String>,
    /// Checker id for tightness searches.
    #[arg(long)]
    checker: Option<String>,
    /// Index of the adjacent pair (values[pair], values[pair+1]).
    #[arg(long)]
    pair: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    n_random: Option<usize>,
    #[arg(long)]
    n_boundary: Option<usize>,
}

impl Flags {
    fn into_config(self) -> RunConfig {
        RunConfig {
            weight: self.weight,
            matrix: self.matrix,
            t: self.t,
            s: self.s,
            seed: self.seed,
            trials: self.trials,
            tol: self.tol,
            out: self.out,
            subalgebra: self.subalgebra,
            budget: self.budget,
            checkers: self.checkers,
            kind: self.kind,
            checker: self.checker,
            pair: self.pair,
            dim: self.dim,
            rank: self.rank,
            n_random: self.n_random,
            n_boundary: self.n_boundary,
            ..RunConfig::default()
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let merge = |f: Flags| f.into_config().or(file.clone());
    match cli.command {
        Command::Compute(f) => commands::compute(&merge(f)),
        Command::Range(f) => commands::range(&merge(f)),
        Command::Verify(f) => commands::verify(&merge(f)),
        Command::Index(f) => commands::index(&merge(f)),
        Command::Search { mode, flags } => match mode {
            SearchKind::Tightness => commands::tightness(&merge(flags)),
            SearchKind::Kappa => commands::kappa(&merge(flags)),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
