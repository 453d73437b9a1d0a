use anyhow::Context;
use balanced_spectra::Error as LabError;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;
mod config;

use config::{ExperimentConfig, UsageError};

#[derive(Debug, Parser)]
#[command(name = "balanced-spectra", version, about = "Spectral lab for balanced random Toeplitz and Hankel matrices")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "BALANCED_SPECTRA_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate ESDs and write eigenvalues, pooled histograms and a manifest.
    Simulate(SimulateArgs),
    /// Averaged empirical moments against the limiting moments.
    Moments(MomentsArgs),
    /// Limiting, truncated or finite-n word moments as JSON.
    Limit(LimitArgs),
    /// Pair-matched words with their linear forms as JSON.
    Words(WordsArgs),
    /// Run the quick invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// JSON config file or run manifest; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    /// Ensembles, comma separated: t, h, bt, bh.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    /// Input distributions, comma separated: normal, rademacher, uniform.
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
    /// Histogram range as `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    /// Truncation levels for Lévy distances to the ε-truncated submatrix.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the first realization's matrix.
    #[arg(long)]
    dump_matrix: bool,
}

#[derive(Debug, Args)]
struct MomentsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    k_max: Option<usize>,
    /// Limit method: quadrature or mc-ladder.
    #[arg(long)]
    method: Option<String>,
    /// Exit with status 1 when a row fails its tolerance.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    kind: Option<String>,
    /// Half the moment order.
    #[arg(long, conflicts_with = "order")]
    k: Option<usize>,
    /// Moment order; odd orders are exactly zero.
    #[arg(long)]
    order: Option<usize>,
    /// quadrature or mc-ladder.
    #[arg(long)]
    method: Option<String>,
    /// Ladder rungs for mc-ladder; a single value with --truncated.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Evaluate the ε-truncated moment at the single --eps value.
    #[arg(long)]
    truncated: bool,
    /// Exact finite-n oracle at this order instead of the limit.
    #[arg(long, conflicts_with = "truncated")]
    finite_n: Option<usize>,
    /// Restrict to one word.
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    batches: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WordsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// inputs, matgen, spectra, words, limits or all.
    #[arg(long)]
    suite: Option<String>,
}

fn parse_range(s: &str) -> anyhow::Result<[f64; 2]> {
    let v: Vec<f64> = config::parse_list(s, "range bound")?;
    match v.as_slice() {
        [lo, hi] => Ok([*lo, *hi]),
        _ => Err(config::usage(format!("range must be 'lo,hi', got '{s}'"))),
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(t) = cli.threads {
        config::positive(t, "threads")?;
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("starting worker pool")?;
    }
    match cli.command {
        Command::Simulate(a) => {
            let flags = ExperimentConfig {
                kind: a.kind,
                n: a.n,
                reps: a.reps,
                dist: a.dist,
                seed: a.common.seed,
                eps: a.eps,
                bins: a.bins,
                range: a.range.as_deref().map(parse_range).transpose()?,
                out: a.out,
                dump_matrix: a.dump_matrix.then_some(true),
                ..Default::default()
            };
            let cfg = ExperimentConfig::load_optional(a.common.config.as_deref())?.overlay(flags);
            commands::simulate::run(cfg)
        }
        Command::Moments(a) => {
            let flags = ExperimentConfig {
                kind: a.kind,
                n: a.n,
                reps: a.reps,
                dist: a.dist,
                seed: a.common.seed,
                k_max: a.k_max,
                method: a.method,
                out: a.out,
                ..Default::default()
            };
            let cfg = ExperimentConfig::load_optional(a.common.config.as_deref())?.overlay(flags);
            commands::moments::run(cfg, a.check)
        }
        Command::Limit(a) => {
            let flags = ExperimentConfig {
                kind: a.kind,
                seed: a.common.seed,
                k: a.k,
                eps: a.eps,
                method: a.method,
                samples: a.samples,
                batches: a.batches,
                out: a.out,
                ..Default::default()
            };
            let cfg = ExperimentConfig::load_optional(a.common.config.as_deref())?.overlay(flags);
            let opts = commands::limit::Options { order: a.order, truncated: a.truncated, finite_n: a.finite_n, word: a.word };
            commands::limit::run(cfg, opts)
        }
        Command::Words(a) => {
            let flags = ExperimentConfig { k: a.k, kind: a.kind, out: a.out, ..Default::default() };
            let cfg = ExperimentConfig::load_optional(a.common.config.as_deref())?.overlay(flags);
            commands::words::run(cfg)
        }
        Command::Verify(a) => {
            let flags = ExperimentConfig { suite: a.suite, seed: a.common.seed, ..Default::default() };
            let cfg = ExperimentConfig::load_optional(a.common.config.as_deref())?.overlay(flags);
            commands::verify::run(cfg)
        }
    }
}

fn is_usage(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.is::<UsageError>()
            || matches!(
                e.downcast_ref::<LabError>(),
                Some(LabError::InvalidArgument(_) | LabError::UnknownMethod(_) | LabError::DegenerateTruncation { .. })
            )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_usage(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
