//! Command-line runner: discovers lattice couplings whose free time
//! evolution performs a requested quantum state transfer, verifies
//! published coupling tables, and benchmarks the optimizer.
//!
//! Exit codes: 0 success, 1 config error, 2 verification mismatch,
//! 3 numerical failure.

mod commands;
mod config;
mod fail;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qst_core::bench::BudgetRule;

use config::{AnnealBlock, FileConfig};
use fail::Failure;

#[derive(Parser)]
#[command(
    name = "qst",
    version,
    about = "Search lattice couplings for high-fidelity quantum state transfer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment description (TOML).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Write artifacts here instead of the config's output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the core count.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize couplings for the configured transfer, then verify the best.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        /// Run a single seed instead of the config's seed list.
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        /// Override the function-call budget; 0 means verify-only.
        #[arg(long, value_name = "N")]
        budget: Option<usize>,
        /// Skip optimization and verify the model block's couplings as-is.
        #[arg(long)]
        verify_only: bool,
    },
    /// Measure calls-to-threshold statistics across chain lengths.
    Bench {
        #[command(flatten)]
        common: CommonArgs,
        /// Override the master seed.
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        /// Replace the budget rule with a fixed per-run call count.
        #[arg(long, value_name = "N")]
        budget: Option<usize>,
    },
    /// Optimize a transfer between every ordered pair of basis states.
    Pairs {
        #[command(flatten)]
        common: CommonArgs,
        /// Override the master seed.
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        /// Override the per-cell call budget.
        #[arg(long, value_name = "N")]
        budget: Option<usize>,
    },
    /// Sweep the on-site repulsions around fixed impurity-chain couplings.
    Usweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Ask one coupling set to serve several transfers at once.
    Multi {
        #[command(flatten)]
        common: CommonArgs,
        /// Override the master seed.
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        /// Override the per-run call budget.
        #[arg(long, value_name = "N")]
        budget: Option<usize>,
    },
    /// Report eigenvalue structure for configured or solved couplings.
    Spectrum {
        /// Experiment description (TOML) naming the couplings.
        #[arg(
            long,
            value_name = "PATH",
            required_unless_present = "solution",
            conflicts_with = "solution"
        )]
        config: Option<PathBuf>,
        /// Read the couplings from a solution file instead.
        #[arg(long, value_name = "PATH")]
        solution: Option<PathBuf>,
        /// Write artifacts here instead of the config's output directory.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}

fn init_workers(workers: Option<usize>) -> Result<(), Failure> {
    if let Some(n) = workers {
        if n == 0 {
            return Err(Failure::config("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::config(format!("cannot size the worker pool: {e}")))?;
    }
    Ok(())
}

fn load(common: &CommonArgs) -> Result<FileConfig, Failure> {
    init_workers(common.workers)?;
    let mut config = FileConfig::load(&common.config)?;
    if let Some(dir) = &common.out {
        config.output.directory = dir.clone();
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { common, seed, budget, verify_only } => {
            let mut config = load(&common)?;
            if seed.is_some() || budget.is_some() || verify_only {
                let anneal = config.anneal.get_or_insert_with(AnnealBlock::default);
                if let Some(calls) = budget {
                    anneal.budget = calls;
                }
                if verify_only {
                    anneal.budget = 0;
                }
                if let Some(seed) = seed {
                    anneal.seeds = vec![seed];
                }
            }
            commands::solve::run(&config)
        }
        Command::Bench { common, seed, budget } => {
            let mut config = load(&common)?;
            if let Some(block) = config.bench.as_mut() {
                if let Some(seed) = seed {
                    block.seed = seed;
                }
                if let Some(calls) = budget {
                    block.budget = BudgetRule::Fixed { calls };
                }
            }
            commands::bench::run(&config)
        }
        Command::Pairs { common, seed, budget } => {
            let mut config = load(&common)?;
            if let Some(block) = config.pairs.as_mut() {
                if let Some(seed) = seed {
                    block.seed = seed;
                }
                if let Some(calls) = budget {
                    block.budget = calls;
                }
            }
            commands::pairs::run(&config)
        }
        Command::Usweep { common } => commands::usweep::run(&load(&common)?),
        Command::Multi { common, seed, budget } => {
            let mut config = load(&common)?;
            if let Some(block) = config.multi.as_mut() {
                if let Some(seed) = seed {
                    block.seed = seed;
                }
                if let Some(calls) = budget {
                    block.budget = calls;
                }
            }
            commands::multi::run(&config)
        }
        Command::Spectrum { config, solution, out } => match (config, solution) {
            (Some(path), None) => {
                let mut file = FileConfig::load(&path)?;
                if let Some(dir) = out {
                    file.output.directory = dir;
                }
                commands::spectrum::run_config(&file)
            }
            (None, Some(path)) => commands::spectrum::run_solution(&path, out.as_deref()),
            _ => unreachable!("clap enforces exactly one input source"),
        },
    }
}
