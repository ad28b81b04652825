//! Experiment runner for the shaping toolkit: sweeps and optimizers
//! driven by TOML configs, emitting provenance-stamped CSV.
//!
//! Exit codes: 0 success, 2 config or usage error, 3 numerical
//! non-convergence (partial output is retained).

mod cmds;
mod config;
mod output;

use clap::{Parser, Subcommand};
use shaper_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shaper", version, about = "Probabilistic shaping sweeps for coded-modulation links")]
struct Cli {
    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Override the config's RNG seed where one is used.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rate vs SNR on the AWGN channel for uniform, per-SNR optimized,
    /// and preset inputs.
    AwgnSweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "awgn_sweep.csv")]
        out: PathBuf,
    },
    /// Two-PMF schedule search per modulation format.
    FixedPmf {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "fixed_pmf.csv")]
        out: PathBuf,
    },
    /// Closed-form fiber model sweeps.
    Gn {
        #[command(subcommand)]
        which: GnCommand,
    },
    /// Direct PMF optimization against the fiber model.
    OptimizePmf {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "optimize_pmf.csv")]
        out: PathBuf,
    },
    /// Split-step fiber simulation.
    Ssfm {
        #[command(subcommand)]
        which: SsfmCommand,
    },
    /// Print standardized moments for a preset, or `all` for the full
    /// comparison table.
    Moments {
        #[arg(default_value = "all")]
        preset: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GnCommand {
    /// Rate and effective SNR vs launch power for one input.
    Power {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "gn_power.csv")]
        out: PathBuf,
    },
    /// Rate vs distance for uniform and per-distance shaped inputs.
    Reach {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "gn_reach.csv")]
        out: PathBuf,
    },
    /// Shaping gain vs design-SNR offset at the uniform-optimal power.
    Mismatch {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "gn_mismatch.csv")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum SsfmCommand {
    /// One simulation run.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "ssfm.csv")]
        out: PathBuf,
    },
    /// Seed and power sweep with mean and std of the measured SNR.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "ssfm.csv")]
        out: PathBuf,
    },
}

fn dispatch(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::AwgnSweep { config, out } => cmds::awgn_sweep(config, out),
        Command::FixedPmf { config, out } => cmds::fixed_pmf(config, out),
        Command::Gn { which } => match which {
            GnCommand::Power { config, out } => cmds::gn_power(config, out),
            GnCommand::Reach { config, out } => cmds::gn_reach(config, out),
            GnCommand::Mismatch { config, out } => cmds::gn_mismatch(config, out),
        },
        Command::OptimizePmf { config, out } => cmds::optimize_pmf(config, out, cli.seed),
        Command::Ssfm { which } => match which {
            SsfmCommand::Run { config, out } => cmds::ssfm_run(config, out, cli.seed),
            SsfmCommand::Sweep { config, out } => cmds::ssfm_sweep(config, out, cli.seed),
        },
        Command::Moments { preset, out } => cmds::moments(preset, out.as_deref()),
    }
}

/// Non-convergence keeps its own exit code so schedulers can retry;
/// everything else that fails is a config or environment problem.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NonConvergence(_)) | Some(Error::Infeasible(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("warning: thread pool already initialized; --threads ignored");
        }
    }
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
