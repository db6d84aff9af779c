//! Front end of `mkdv`: configuration, grid sweeps and file emission.
//!
//! Exit codes: 0 success, 2 configuration or I/O error, 3 failed
//! verification, 4 numeric capability error.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod sweep;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::RunConfig;
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "mkdv", version, about = "Soliton solutions of the defocusing mKdV equation and the curves they move")]
pub struct Cli {
    /// Worker threads for grid evaluation (default: all cores). Output does
    /// not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Seed for sampled checks; overrides the config's `seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write κ and θ profiles per time slice (kappa.csv, theta.csv).
    Solve(RunArgs),
    /// Write the curve polylines per time slice (curve.csv, curve.svg).
    Curve(RunArgs),
    /// Run the residual checks and write verify_report.json.
    Verify(RunArgs),
    /// Regenerate the preset datasets under <out>/fig1 .. fig5.
    Figures {
        #[arg(long, default_value = "figures")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load(args: &RunArgs) -> CliResult<(RunConfig, u64)> {
    let cfg = RunConfig::from_path(&args.config)?;
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    Ok((cfg, seed))
}

/// Runs one invocation. Output paths are reported on stdout.
pub fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads: must be at least 1".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let written = match &cli.command {
        Command::Solve(args) => {
            let (cfg, _) = load(args)?;
            commands::solve(&cfg, &args.out)?
        }
        Command::Curve(args) => {
            let (cfg, _) = load(args)?;
            commands::curve(&cfg, &args.out)?
        }
        Command::Verify(args) => {
            let (cfg, seed) = load(args)?;
            commands::verify(&cfg, &args.out, seed)?;
            if cfg.wants(config::Output::ResidualReport) {
                vec![args.out.join(commands::REPORT_JSON)]
            } else {
                Vec::new()
            }
        }
        Command::Figures { out, seed } => commands::figures(out, *seed)?,
    };
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
