use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ghadapt::cli::{self, Experiment, ExperimentSpec, Overrides, Preset};
use ghadapt::memory::Strategy;
use ghadapt::Error;

/// Continual-learning LSTM experiments across synthetic greenhouses.
///
/// Every value comes from the preset, then the spec file, then the flags below;
/// flags win. Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.
#[derive(Parser, Debug)]
#[command(name = "ghadapt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON experiment spec (see schema/experiment.schema.json).
    #[arg(long, global = true, value_name = "PATH")]
    spec: Option<PathBuf>,
    /// Root seed; every random stream is derived from it.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Output directory [default: out].
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Size preset [default: desk].
    #[arg(long, global = true, value_enum)]
    preset: Option<Preset>,
    /// Replay samples drawn per update; 0 disables replay.
    #[arg(long, global = true, value_name = "N")]
    replay_size: Option<usize>,
    /// Episodic memory substitution strategy [default: per-batch].
    #[arg(long, global = true, value_enum)]
    memory_strategy: Option<Strategy>,
    /// Also evaluate earlier greenhouses' test sets and write run/retention.csv.
    #[arg(long, global = true)]
    retention: bool,
    /// Write memory occupancy per greenhouse after every update to run/memory.csv.
    #[arg(long, global = true)]
    dump_memory: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate synthetic greenhouse CSVs into <out>/data.
    Generate,
    /// Train one model through all greenhouses in order; writes <out>/run.
    Run,
    /// Train a fresh model on one greenhouse only; writes <out>/baseline-<label>.
    Baseline {
        /// Greenhouse label to train on.
        #[arg(long, value_name = "LABEL")]
        phase: String,
    },
    /// Compare the run against baselines at each greenhouse switch; writes <out>/compare.csv.
    Compare {
        /// Run directory [default: <out>/run].
        #[arg(long, value_name = "DIR")]
        run: Option<PathBuf>,
        /// Baseline directory; repeatable [default: every <out>/baseline-*].
        #[arg(long, value_name = "DIR")]
        baseline: Vec<PathBuf>,
    },
}

fn execute(cli: Cli) -> ghadapt::Result<()> {
    let c = cli.common;
    let spec = match &c.spec {
        Some(path) => ExperimentSpec::load(path)?,
        None => ExperimentSpec::default(),
    };
    let flags = Overrides {
        preset: c.preset,
        seed: c.seed,
        output_dir: c.out,
        replay_size: c.replay_size,
        memory_strategy: c.memory_strategy,
        retention: c.retention,
        dump_memory: c.dump_memory,
    };
    let exp = Experiment::resolve(&spec, &flags)?;
    match cli.command {
        Command::Generate => {
            for path in cli::generate(&exp)? {
                println!("wrote {}", path.display());
            }
        }
        Command::Run => {
            let curve = cli::run(&exp)?;
            println!("{} evaluations, {} phases -> {}", curve.points.len(), curve.boundaries.len(), exp.run_dir().display());
        }
        Command::Baseline { phase } => {
            let curve = cli::baseline(&exp, &phase)?;
            println!("{} evaluations -> {}", curve.points.len(), exp.baseline_dir(&phase).display());
        }
        Command::Compare { run, baseline } => {
            let run = run.unwrap_or_else(|| exp.run_dir());
            let baselines = if baseline.is_empty() { cli::find_baselines(&exp.output_dir)? } else { baseline };
            let rows = cli::compare_dirs(&run, &baselines, &exp.output_dir.join("compare.csv"))?;
            print!("{}", cli::format_table(&rows));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// `error kind=<kind> exit=<code> message=<json string>` on one line.
fn error_line(e: &Error) -> String {
    let message = serde_json::to_string(&e.to_string()).unwrap_or_default();
    format!("error kind={} exit={} message={}", e.kind(), e.exit_code(), message)
}
