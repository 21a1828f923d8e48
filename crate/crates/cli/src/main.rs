//! `vbqc`: batch runner for the protocol experiments.
//!
//! Exit codes: 0 when every bound check passes, 1 when any check fails,
//! 2 on configuration or runtime errors.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use vbqc_cli::{run_experiment_with_rows, write_csv, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "vbqc",
    about = "Monte Carlo experiments and bound checks for verifiable blind computation protocols",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON config file; its fields win over flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Root seed (all randomness derives from it).
    #[arg(long)]
    seed: Option<u64>,
    /// Trial/session count, where the experiment has one.
    #[arg(long)]
    trials: Option<u64>,
    /// Write the JSON report here (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-trial rows as CSV here, for experiments that produce them.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads (default: the VBQC_WORKERS env var, else all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Honest-prover completeness of the single-server protocol.
    Fk(Common),
    /// Accept-and-correct frequency under deviated inputs vs the 1-2eps floor.
    Robustness(Common),
    /// Game win rates, the classical ceiling and the referee threshold.
    Chsh(Common),
    /// Steered-tomography acceptance and the prepared-closeness sweep.
    Tomography(Common),
    /// End-to-end two-stage composition runs.
    Composite(Common),
    /// Depolarizing noise, trap thresholds and the repetition protocol.
    Ft(Common),
    /// Closed-form calculators (log-domain round counts, bound values).
    Bounds(Common),
}

impl Command {
    fn kind(&self) -> &'static str {
        match self {
            Command::Fk(_) => "fk",
            Command::Robustness(_) => "robustness",
            Command::Chsh(_) => "chsh",
            Command::Tomography(_) => "tomography",
            Command::Composite(_) => "composite",
            Command::Ft(_) => "ft",
            Command::Bounds(_) => "bounds",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Fk(c)
            | Command::Robustness(c)
            | Command::Chsh(c)
            | Command::Tomography(c)
            | Command::Composite(c)
            | Command::Ft(c)
            | Command::Bounds(c) => c,
        }
    }
}

fn main() {
    vbqc_mc::tune_allocator();
    let cli = Cli::parse();
    std::process::exit(run(&cli));
}

fn run(cli: &Cli) -> i32 {
    let common = cli.command.common();

    let workers = common.workers.or_else(|| {
        std::env::var("VBQC_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(w) = workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: worker pool: {e}");
            return 2;
        }
    }

    let config = match ExperimentConfig::resolve(
        cli.command.kind(),
        common.config.as_deref(),
        common.seed,
        common.trials,
    ) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };

    let (report, header, rows) = match run_experiment_with_rows(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };

    if let Some(path) = &common.csv {
        if rows.is_empty() {
            eprintln!("note: the {} experiment produces no per-trial rows", report.experiment);
        } else if let Err(e) = write_csv(path, &header, &rows) {
            eprintln!("error: writing csv: {e}");
            return 2;
        }
    }

    let json = report.to_json_pretty();
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: writing report: {e}");
                return 2;
            }
            eprint!("{}", report.summary_lines());
        }
        None => {
            println!("{json}");
            eprint!("{}", report.summary_lines());
        }
    }

    i32::from(!report.passed())
}
