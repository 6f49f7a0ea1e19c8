//! `discern` — rule-based driving decisions over recorded scenarios.
//!
//! Subcommands: `decide` (one frame), `run` (every frame), `bench`
//! (latency over a corpus directory), `check` (rulebase + overlay lint).
//!
//! Exit codes: 0 success, 1 parse/lint/input error, 2 stratification
//! error, 3 engine runtime fault, 4 latency budget exceeded.

mod app;
mod record;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    /// Human-readable lines (and tables for `bench`).
    #[default]
    Text,
    /// Machine-readable JSON, one object per record.
    Json,
}

impl Format {
    fn json(self) -> bool {
        self == Format::Json
    }
}

#[derive(Parser)]
#[command(
    name = "discern",
    version,
    about = "Rule-based driving decision engine",
    after_help = "Exit codes: 0 success, 1 parse/lint error, 2 stratification error, \
                  3 runtime fault, 4 latency budget exceeded."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a single frame of a scenario file.
    Decide {
        /// Scenario file (.scn).
        file: PathBuf,
        /// Frame timestamp to decide.
        #[arg(long)]
        t: u64,
        /// Append the full justification tree to each decision.
        #[arg(long)]
        explain: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Replay a scenario, deciding every frame in order.
    Run {
        /// Scenario file (.scn).
        file: PathBuf,
        /// Append the full justification tree to each decision.
        #[arg(long)]
        explain: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Measure decision latency over every scenario in a directory.
    Bench {
        /// Directory containing .scn scenario files.
        dir: PathBuf,
        /// How many times to replay each scenario.
        #[arg(long, default_value_t = 1)]
        reps: u32,
        /// Fail (exit 4) if any per-environment average exceeds this budget.
        #[arg(long)]
        assert_avg_ms: Option<f64>,
        /// Fail (exit 4) if any single decision exceeds this budget.
        #[arg(long)]
        assert_max_ms: Option<f64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Parse, stratify, and lint the shipped rulebase plus overlay files.
    Check {
        /// Extra rule files layered on top of the shipped catalog.
        files: Vec<PathBuf>,
        /// Treat lint warnings as errors.
        #[arg(long)]
        strict: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Decide { file, t, explain, format } => {
            app::cmd_decide(&file, t, explain, format.json())
        }
        Cmd::Run { file, explain, format } => app::cmd_run(&file, explain, format.json()),
        Cmd::Bench { dir, reps, assert_avg_ms, assert_max_ms, format } => {
            app::cmd_bench(&dir, reps, assert_avg_ms, assert_max_ms, format.json())
        }
        Cmd::Check { files, strict } => app::cmd_check(&files, strict),
    };
    if let Err(error) = result {
        eprintln!("discern: {error}");
        std::process::exit(error.exit_code());
    }
}
