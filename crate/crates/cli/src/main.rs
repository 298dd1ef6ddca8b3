use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use coexsim_cli::output::{write_dir, write_stdout, Format};
use coexsim_cli::runner::{run_scenario, run_sweep, RunOptions, RunOutput};
use coexsim_cli::scenario::{parse_scenario, parse_sweep, ScenarioError};
use coexsim_core::oracle::{exhaustive_metrics, two_node_stationary};

#[derive(Parser)]
#[command(name = "coexsim", version, about = "Channel access coexistence simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario over its seeds.
    Run(RunArgs),
    /// Run every point of a sweep file.
    Sweep(RunArgs),
    /// Exact results for small instances.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Check a scenario file and report every problem found.
    Validate {
        file: PathBuf,
        /// Treat the file as a sweep.
        #[arg(long)]
        sweep: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    /// Override the number of rounds per seed.
    #[arg(long)]
    rounds: Option<u64>,
    /// Override the seed list (repeatable).
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Write result files here instead of printing a summary.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Also write rounds.csv (needs --out).
    #[arg(long)]
    log_rounds: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Enumerate every backoff outcome for `horizon` rounds.
    Exhaustive {
        file: PathBuf,
        #[arg(long)]
        horizon: u32,
    },
    /// Stationary chain of two random-access nodes with a fixed window.
    Stationary {
        #[arg(long)]
        cw: u32,
    },
}

fn apply_overrides(rounds: &mut u64, seeds: &mut Vec<u64>, args: &RunArgs) -> Result<()> {
    if let Some(r) = args.rounds {
        if r == 0 {
            bail!("--rounds must be at least 1");
        }
        *rounds = r;
    }
    if !args.seeds.is_empty() {
        *seeds = args.seeds.clone();
    }
    Ok(())
}

fn emit(out: &RunOutput, args: &RunArgs) -> Result<()> {
    let format = match args.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    match &args.out {
        Some(dir) => {
            for path in write_dir(out, dir, format)? {
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            if args.log_rounds {
                bail!("--log-rounds needs --out");
            }
            write_stdout(out, format, io::stdout().lock())?;
        }
    }
    Ok(())
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let mut spec = parse_scenario(&args.file)?;
            apply_overrides(&mut spec.rounds, &mut spec.seeds, &args)?;
            let opts = RunOptions { log_rounds: args.log_rounds };
            let out = run_scenario(&spec, opts)?;
            emit(&out, &args)
        }
        Command::Sweep(args) => {
            let mut sweep = parse_sweep(&args.file)?;
            for p in &mut sweep.points {
                apply_overrides(&mut p.spec.rounds, &mut p.spec.seeds, &args)?;
            }
            let opts = RunOptions { log_rounds: args.log_rounds };
            let out = run_sweep(&sweep, opts)?;
            emit(&out, &args)
        }
        Command::Oracle(OracleCommand::Exhaustive { file, horizon }) => {
            let spec = parse_scenario(&file)?;
            let report = exhaustive_metrics(&spec.scenario, horizon)
                .with_context(|| format!("exhaustive oracle on {}", file.display()))?;
            print_json(&report)
        }
        Command::Oracle(OracleCommand::Stationary { cw }) => print_json(&two_node_stationary(cw)?),
        Command::Validate { file, sweep } => {
            let result: Result<usize, ScenarioError> = if sweep {
                parse_sweep(&file).map(|s| s.points.iter().map(|p| p.spec.scenario.nodes.len()).sum())
            } else {
                parse_scenario(&file).map(|s| s.scenario.nodes.len())
            };
            let nodes = result?;
            println!("{}: ok ({nodes} nodes)", file.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
