use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vrpsk::adaptation::ThresholdFamily;

use vrpsk_cli::commands;
use vrpsk_cli::config::{FileConfig, Overrides};

/// Link-adaptation experiments for variable-rate M-PSK over Rayleigh fading.
#[derive(Parser)]
#[command(name = "vrpsk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the switching thresholds for a target symbol error rate.
    Thresholds {
        /// Modulation family the threshold formula belongs to.
        #[arg(long, default_value = "psk")]
        family: ThresholdFamily,
        /// Target symbol error rate in (0, 1).
        #[arg(long)]
        target_ser: f64,
        /// Ascending constellation sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u32>,
    },
    /// Evaluate every closed form against its quadrature oracle over the
    /// configured SNR sweep and write one CSV per metric.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Output directory for the CSV files.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the configured Monte-Carlo sweep and write simulate.csv.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the RNG seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the per-point trial count from the config.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the worker-thread count (never changes results).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Regenerate the data behind one of the paper-style figures.
    Reproduce {
        /// One of fig3, fig4, fig5, fig6, fig7, fig8.
        #[arg(long)]
        target: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn run() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Thresholds {
            family,
            target_ser,
            orders,
        } => {
            print!("{}", commands::cmd_thresholds(family, target_ser, &orders)?);
            Ok(())
        }
        Command::Analyze { config, out } => {
            let file = FileConfig::load(&config)?;
            commands::cmd_analyze(&file, &out)
        }
        Command::Simulate {
            config,
            out,
            seed,
            trials,
            workers,
        } => {
            let file = FileConfig::load(&config)?;
            let overrides = Overrides {
                seed,
                trials,
                workers,
            };
            commands::cmd_simulate(&file, &overrides, &out)
        }
        Command::Reproduce {
            target,
            out,
            seed,
            trials,
            workers,
        } => {
            let overrides = Overrides {
                seed,
                trials,
                workers,
            };
            commands::cmd_reproduce(&target, &overrides, &out)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
