use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use fpg_core::evaluation::{holdout_split, run_experiment, summary_csv, GatTrainer};
use fpg_core::geometry::frame_graph;
use fpg_core::io::{
    generate_synthetic, load_dataset, write_atomic, write_dataset, RunConfig, SyntheticSpec,
};
use fpg_core::model::{gradient_suite, Checkpoint, FpgModel};
use fpg_core::pipeline::{self, Repetition};
use fpg_core::{Error, Result};

use crate::{GradcheckArgs, RunArgs, SynthArgs, TriangulateArgs};

const GRADCHECK_TOLERANCE: f64 = 1e-4;

pub fn synth(a: SynthArgs) -> Result<ExitCode> {
    let spec = SyntheticSpec {
        n_subjects_per_class: a.subjects_per_class,
        reps_per_subject: a.reps,
        frames_per_rep: a.frames,
        motion_amplitude_hc: a.amplitude_hc,
        motion_amplitude_als: a.amplitude_als,
        noise_sigma: a.noise,
        seed: a.seed,
        task: a.task,
    };
    let data = generate_synthetic(&spec)?;
    write_dataset(&data, &a.out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn triangulate(a: TriangulateArgs) -> Result<ExitCode> {
    let cfg = load_config(a.config.as_deref())?;
    let data = load_dataset(&a.data, a.task)?;
    let subject = match &a.subject {
        Some(id) => data
            .subject(id)
            .ok_or_else(|| Error::Config(format!("no subject {id:?} in {}", a.data.display())))?,
        None => data
            .subjects()
            .first()
            .ok_or_else(|| Error::EmptyInput("dataset has no subjects".into()))?,
    };
    let rep = subject
        .repetitions()
        .iter()
        .find(|r| {
            a.repetition
                .as_ref()
                .is_none_or(|id| &r.repetition_id == id)
        })
        .ok_or_else(|| {
            Error::Config(format!("no matching repetition for {}", subject.subject_id))
        })?;
    let frame = match a.frame {
        Some(i) => rep
            .frames()
            .iter()
            .find(|f| f.frame_index() == i)
            .ok_or_else(|| Error::Config(format!("no frame {i} in {}", rep.repetition_id)))?,
        None => &rep.frames()[0],
    };
    let graph = frame_graph(frame, &cfg.subset()?)?;
    let json = serde_json::to_string_pretty(&graph.to_json()).map_err(json_error)?;
    match a.out {
        Some(path) => write_atomic(&path, json.as_bytes())?,
        None => print_stdout(&format!("{json}\n"))?,
    }
    Ok(ExitCode::SUCCESS)
}

pub fn train(a: RunArgs) -> Result<ExitCode> {
    let (cfg, out) = resolve(&a)?;
    let task = a
        .task
        .ok_or_else(|| Error::Config("train needs --task".into()))?;
    let data = load_dataset(&a.data, Some(task))?;
    let (val_ids, train_ids) = holdout_split(&data, cfg.seed)?;
    let reps = |ids: &[String]| -> Vec<&Repetition> {
        ids.iter()
            .filter_map(|id| data.subject(id))
            .flat_map(|s| s.repetitions())
            .collect()
    };
    let subset = cfg.subset()?;
    let model = FpgModel::new(cfg.model_config(), cfg.seed)?;
    let (model, history) = pipeline::train(
        model,
        &subset,
        &reps(&train_ids),
        &reps(&val_ids),
        &cfg.train_config(),
    )?;
    fs::create_dir_all(&out)?;
    Checkpoint::new(&model, &subset).save(&out.join("checkpoint.json"))?;
    write_atomic(&out.join("history.csv"), history.to_csv().as_bytes())?;
    eprintln!(
        "validation subjects {} and {}; best epoch {} of {}",
        val_ids[0],
        val_ids[1],
        history.best_epoch,
        history.epochs.len()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn evaluate(a: RunArgs) -> Result<ExitCode> {
    let (cfg, out) = resolve(&a)?;
    let data = load_dataset(&a.data, a.task)?;
    let tasks: Vec<_> = match a.task {
        Some(t) => vec![t],
        None => data.tasks().into_iter().collect(),
    };
    let trainer = GatTrainer {
        model: cfg.model_config(),
        subset: cfg.subset()?,
        train: cfg.train_config(),
    };
    let results = tasks
        .iter()
        .map(|&t| run_experiment(&data, t, &trainer, cfg.seed))
        .collect::<Result<Vec<_>>>()?;
    fs::create_dir_all(&out)?;
    let json = serde_json::to_string_pretty(&results).map_err(json_error)?;
    write_atomic(&out.join("metrics.json"), json.as_bytes())?;
    let summary = summary_csv(&results);
    write_atomic(&out.join("summary.csv"), summary.as_bytes())?;
    print_stdout(&summary)?;
    Ok(ExitCode::SUCCESS)
}

pub fn gradcheck(a: GradcheckArgs) -> Result<ExitCode> {
    if !(a.step > 0.0 && a.step.is_finite()) {
        return Err(Error::Config(format!(
            "--step must be positive, got {}",
            a.step
        )));
    }
    let reports = gradient_suite(a.seed, a.instances, a.step)?;
    let worst = reports.iter().map(|r| r.relative_error).fold(0.0, f64::max);
    print_stdout(&format!(
        "max relative error {worst:.3e} over {} instances\n",
        reports.len()
    ))?;
    Ok(if worst < GRADCHECK_TOLERANCE {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

/// Config file first, then flags on top.
fn resolve(a: &RunArgs) -> Result<(RunConfig, PathBuf)> {
    let mut cfg = load_config(a.config.as_deref())?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(e) = a.epochs {
        cfg.max_epochs = e;
    }
    if let Some(b) = a.batch_size {
        cfg.batch_size = b;
    }
    if let Some(lr) = a.lr_gat {
        cfg.lr_gat = lr;
    }
    if let Some(lr) = a.lr_linear {
        cfg.lr_linear = lr;
    }
    if let Some(out) = &a.out {
        cfg.output_dir = out.clone();
    }
    cfg.validate()?;
    let out = cfg.output_dir.clone();
    Ok((cfg, out))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Io(e.into())
}

/// A closed pipe (`fpg triangulate ... | head`) is not a failure.
fn print_stdout(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}
