use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use driftclt::cli::{exact_table, load_config, simulate_table, theory_report, verify_exit_code, verify_report};
use driftclt::exact::DEFAULT_BUDGET;
use driftclt::Error;

#[derive(Parser)]
#[command(name = "driftclt", version = driftclt::VERSION, about = "Gaussian limits of linear-drift Markov chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Limit constants of a model.
    Theory {
        /// JSON config, inline or a file path.
        #[arg(long)]
        config: String,
        /// Exit with code 3 unless a non-degenerate Gaussian limit is predicted.
        #[arg(long)]
        require_nondegenerate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact law of S_n by dynamic programming.
    Exact {
        #[arg(long)]
        config: String,
        #[arg(long)]
        n: u64,
        /// Print probabilities as exact fractions.
        #[arg(long)]
        rational: bool,
        /// Maximum number of DP cells.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded Monte Carlo replicates of the final value.
    Simulate {
        #[arg(long)]
        config: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo check of the predicted Gaussian moments.
    Verify {
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 4000)]
        n: u64,
        #[arg(long, default_value_t = 40_000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Error::Config(e.to_string()))
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Theory { config, require_nondegenerate, out } => {
            let report = theory_report(&load_config(&config)?)?;
            emit(out.as_ref(), &json(&report))?;
            Ok(if require_nondegenerate && !report.nondegenerate() { 3 } else { 0 })
        }
        Command::Exact { config, n, rational, budget, out } => {
            let (csv, summary) = exact_table(&load_config(&config)?, n, budget, rational)?;
            emit(out.as_ref(), &csv)?;
            eprintln!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            Ok(0)
        }
        Command::Simulate { config, n, reps, seed, out } => {
            emit(out.as_ref(), &simulate_table(&load_config(&config)?, n, reps, seed)?)?;
            Ok(0)
        }
        Command::Verify { config, n, reps, seed, kmax, out } => {
            let report = verify_report(&load_config(&config)?, n, reps, seed, kmax)?;
            emit(out.as_ref(), &json(&report))?;
            Ok(verify_exit_code(&report))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
