use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fpg_core::pipeline::Task;

mod commands;

#[derive(Debug, Parser)]
#[command(
    name = "fpg",
    version,
    about = "Facial point graph classification of ALS from landmark sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated landmark dataset as CSV.
    Synth(SynthArgs),
    /// Print the graph built from one frame as JSON.
    Triangulate(TriangulateArgs),
    /// Train on one train/validation split and save a checkpoint.
    Train(RunArgs),
    /// Leave-one-subject-out evaluation, one experiment per task.
    Evaluate(RunArgs),
    /// Compare analytic gradients with finite differences.
    Gradcheck(GradcheckArgs),
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    subjects_per_class: usize,
    #[arg(long, default_value_t = 4)]
    reps: usize,
    #[arg(long, default_value_t = 30)]
    frames: usize,
    /// Peak lip/jaw motion of HC subjects in pixels.
    #[arg(long, default_value_t = 20.0)]
    amplitude_hc: f64,
    #[arg(long, default_value_t = 5.0)]
    amplitude_als: f64,
    /// Standard deviation of per-landmark noise in pixels.
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    #[arg(long, default_value = "SPREAD")]
    task: Task,
}

#[derive(Debug, Args)]
struct TriangulateArgs {
    #[arg(long)]
    data: PathBuf,
    /// Defaults to the first subject.
    #[arg(long)]
    subject: Option<String>,
    #[arg(long)]
    task: Option<Task>,
    #[arg(long)]
    repetition: Option<String>,
    /// Frame index within the repetition; defaults to its first frame.
    #[arg(long)]
    frame: Option<u32>,
    /// Write the JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run configuration providing the landmark subset.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    data: PathBuf,
    /// Restrict to one task; `evaluate` runs every task present otherwise.
    #[arg(long)]
    task: Option<Task>,
    /// Output directory (overrides the configuration).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    lr_gat: Option<f64>,
    #[arg(long)]
    lr_linear: Option<f64>,
}

#[derive(Debug, Args)]
struct GradcheckArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    instances: usize,
    /// Finite-difference step.
    #[arg(long, default_value_t = fpg_core::numerics::gradcheck::DEFAULT_STEP)]
    step: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version go to stdout with status 0, usage errors exit 2
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Synth(a) => commands::synth(a),
        Command::Triangulate(a) => commands::triangulate(a),
        Command::Train(a) => commands::train(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Gradcheck(a) => commands::gradcheck(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_user_error() { 2 } else { 1 })
        }
    }
}
