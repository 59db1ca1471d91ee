//! Leave-one-subject-out run on generated data.
//!
//! `cargo run --release -p fpg-core --example synthetic_loso -- [seed] [config.toml]`

use std::path::Path;
use std::time::Instant;

use fpg_core::evaluation::{run_experiment, GatTrainer};
use fpg_core::io::{generate_synthetic, RunConfig, SyntheticSpec};
use fpg_core::pipeline::Task;

fn main() -> fpg_core::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed = args.first().and_then(|s| s.parse().ok()).unwrap_or(0);
    let cfg = match args.get(1) {
        Some(path) => RunConfig::load(Path::new(path))?,
        None => RunConfig::default(),
    };
    let data = generate_synthetic(&SyntheticSpec {
        seed,
        ..SyntheticSpec::default()
    })?;
    let trainer = GatTrainer {
        model: cfg.model_config(),
        subset: cfg.subset()?,
        train: cfg.train_config(),
    };
    let start = Instant::now();
    let result = run_experiment(&data, Task::Spread, &trainer, seed)?;
    let epochs: Vec<usize> = result.folds.iter().map(|f| f.epochs_trained).collect();
    println!(
        "seed {seed}: repetition acc {:.3}, subject acc {:.3}, epochs {:?}, {:.1}s",
        result.repetition.accuracy.unwrap_or(f64::NAN),
        result.subject.accuracy.unwrap_or(f64::NAN),
        epochs,
        start.elapsed().as_secs_f64()
    );
    Ok(())
}
