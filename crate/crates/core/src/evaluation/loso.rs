//! Leave-one-subject-out cross-validation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{compute_metrics, Confusion, MetricsReport, Mode};
use crate::error::{Error, Result};
use crate::geometry::LandmarkSubset;
use crate::model::{FpgModel, ModelConfig};
use crate::pipeline::{
    majority_vote, predict_repetition, train, Class, Dataset, FpgClassifier, FrameClassifier,
    Repetition, Task, TrainConfig,
};
use crate::seed::derive_seed;

const VALIDATION_STREAM: u64 = 0x5641_4c49_4441_5445;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub fold_index: usize,
    pub test_subject_id: String,
    /// One HC subject, then one ALS subject.
    pub val_subject_ids: [String; 2],
    pub train_subject_ids: Vec<String>,
}

fn ids_by_group(dataset: &Dataset) -> Result<(Vec<&str>, Vec<&str>)> {
    let ids_of = |g: Class| -> Vec<&str> {
        dataset
            .subjects()
            .iter()
            .filter(|s| s.group == g)
            .map(|s| s.subject_id.as_str())
            .collect()
    };
    let (hc, als) = (ids_of(Class::Hc), ids_of(Class::Als));
    if hc.len() < 2 || als.len() < 2 {
        return Err(Error::Config(format!(
            "leave-one-subject-out needs at least 2 HC and 2 ALS subjects, got {} and {}",
            hc.len(),
            als.len()
        )));
    }
    Ok((hc, als))
}

/// Seeded HC and ALS validation draw; a pick equal to `exclude` is redrawn.
fn draw_validation(hc: &[&str], als: &[&str], exclude: &str, stream: u64) -> [String; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    let mut draw = |pool: &[&str]| loop {
        let pick = pool[rng.gen_range(0..pool.len())];
        if pick != exclude {
            break pick.to_string();
        }
    };
    let val_hc = draw(hc);
    [val_hc, draw(als)]
}

fn remaining_ids(dataset: &Dataset, taken: &[&str]) -> Vec<String> {
    dataset
        .subjects()
        .iter()
        .map(|s| &s.subject_id)
        .filter(|id| !taken.contains(&id.as_str()))
        .cloned()
        .collect()
}

/// One fold per subject, in subject-id order. Each fold draws an HC and an
/// ALS validation subject; a draw that hits the test subject is repeated.
pub fn loso_folds(dataset: &Dataset, seed: u64) -> Result<Vec<FoldPlan>> {
    let (hc, als) = ids_by_group(dataset)?;
    let mut folds = Vec::with_capacity(dataset.subjects().len());
    for (i, test) in dataset.subjects().iter().enumerate() {
        let test_id = test.subject_id.as_str();
        let val = draw_validation(
            &hc,
            &als,
            test_id,
            derive_seed(seed ^ VALIDATION_STREAM, i as u64),
        );
        let train_subject_ids = remaining_ids(dataset, &[test_id, &val[0], &val[1]]);
        folds.push(FoldPlan {
            fold_index: i,
            test_subject_id: test.subject_id.clone(),
            val_subject_ids: val,
            train_subject_ids,
        });
    }
    Ok(folds)
}

/// Train/validation split without a test subject: `(validation pair,
/// training ids)`, drawn the same way as a fold's validation pair.
pub fn holdout_split(dataset: &Dataset, seed: u64) -> Result<([String; 2], Vec<String>)> {
    let (hc, als) = ids_by_group(dataset)?;
    let val = draw_validation(
        &hc,
        &als,
        "",
        derive_seed(seed ^ VALIDATION_STREAM, u64::MAX),
    );
    let train = remaining_ids(dataset, &[&val[0], &val[1]]);
    Ok((val, train))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitionPrediction {
    pub repetition_id: String,
    pub predicted: Class,
    pub actual: Class,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectPrediction {
    pub predicted: Class,
    pub actual: Class,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldResult {
    pub plan: FoldPlan,
    pub repetition_predictions: Vec<RepetitionPrediction>,
    pub subject_prediction: SubjectPrediction,
    pub epochs_trained: usize,
}

/// Fits a frame classifier for one fold.
pub trait FoldTrainer: Sync {
    type Classifier: FrameClassifier + Send;

    fn fit(
        &self,
        train: &[&Repetition],
        val: &[&Repetition],
        seed: u64,
    ) -> Result<(Self::Classifier, usize)>;
}

/// Trains a freshly initialised network per fold.
#[derive(Debug, Clone, Default)]
pub struct GatTrainer {
    pub model: ModelConfig,
    pub subset: LandmarkSubset,
    pub train: TrainConfig,
}

impl FoldTrainer for GatTrainer {
    type Classifier = FpgClassifier;

    fn fit(
        &self,
        train_set: &[&Repetition],
        val: &[&Repetition],
        seed: u64,
    ) -> Result<(FpgClassifier, usize)> {
        let model = FpgModel::new(self.model, seed)?;
        let cfg = TrainConfig {
            seed,
            ..self.train.clone()
        };
        let (model, history) = train(model, &self.subset, train_set, val, &cfg)?;
        Ok((
            FpgClassifier {
                model,
                subset: self.subset.clone(),
            },
            history.epochs.len(),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub task: Task,
    pub seed: u64,
    pub folds: Vec<FoldResult>,
    pub repetition: MetricsReport,
    pub subject: MetricsReport,
}

impl ExperimentResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("experiment results serialise")
    }
}

fn repetitions_of<'a>(dataset: &'a Dataset, ids: &[String]) -> Vec<&'a Repetition> {
    ids.iter()
        .filter_map(|id| dataset.subject(id))
        .flat_map(|s| s.repetitions())
        .collect()
}

pub fn run_fold<T: FoldTrainer>(
    dataset: &Dataset,
    plan: &FoldPlan,
    trainer: &T,
    seed: u64,
    frames_per_repetition: usize,
) -> Result<FoldResult> {
    let train_reps = repetitions_of(dataset, &plan.train_subject_ids);
    let val_reps = repetitions_of(dataset, &plan.val_subject_ids);
    let (classifier, epochs_trained) = trainer.fit(
        &train_reps,
        &val_reps,
        derive_seed(seed, plan.fold_index as u64),
    )?;
    let test = dataset
        .subject(&plan.test_subject_id)
        .ok_or_else(|| Error::Integrity(format!("unknown subject {}", plan.test_subject_id)))?;
    let repetition_predictions: Vec<RepetitionPrediction> = test
        .repetitions()
        .iter()
        .map(|r| {
            Ok(RepetitionPrediction {
                repetition_id: r.repetition_id.clone(),
                predicted: predict_repetition(r, &classifier, frames_per_repetition)?,
                actual: r.label,
            })
        })
        .collect::<Result<_>>()?;
    let votes: Vec<Class> = repetition_predictions.iter().map(|p| p.predicted).collect();
    Ok(FoldResult {
        plan: plan.clone(),
        subject_prediction: SubjectPrediction {
            predicted: majority_vote(&votes)?,
            actual: test.group,
        },
        repetition_predictions,
        epochs_trained,
    })
}

/// Aggregate fold results into repetition- and subject-mode reports.
pub fn aggregate(folds: &[FoldResult]) -> Result<(MetricsReport, MetricsReport)> {
    let reps: Vec<(Class, Class)> = folds
        .iter()
        .flat_map(|f| {
            f.repetition_predictions
                .iter()
                .map(|p| (p.predicted, p.actual))
        })
        .collect();
    let subjects: Vec<(Class, Class)> = folds
        .iter()
        .map(|f| (f.subject_prediction.predicted, f.subject_prediction.actual))
        .collect();
    Ok((
        compute_metrics(Mode::Repetition, &reps)?,
        compute_metrics(Mode::Subject, &subjects)?,
    ))
}

/// Full LOSO run on one task with any fold trainer. Folds run in parallel
/// and are merged in fold order.
pub fn run_experiment_with<T: FoldTrainer>(
    dataset: &Dataset,
    task: Task,
    trainer: &T,
    seed: u64,
    frames_per_repetition: usize,
) -> Result<ExperimentResult> {
    let data = dataset.filter_task(task);
    if data.subjects().is_empty() {
        return Err(Error::Config(format!("no repetitions for task {task}")));
    }
    let plans = loso_folds(&data, seed)?;
    let folds: Vec<FoldResult> = plans
        .par_iter()
        .map(|p| run_fold(&data, p, trainer, seed, frames_per_repetition))
        .collect::<Result<_>>()?;
    let (repetition, subject) = aggregate(&folds)?;
    Ok(ExperimentResult {
        task,
        seed,
        folds,
        repetition,
        subject,
    })
}

pub fn run_experiment(
    dataset: &Dataset,
    task: Task,
    trainer: &GatTrainer,
    seed: u64,
) -> Result<ExperimentResult> {
    run_experiment_with(
        dataset,
        task,
        trainer,
        seed,
        trainer.train.frames_per_repetition,
    )
}

/// Per-fold confusion counts at repetition level.
pub fn fold_confusion(fold: &FoldResult) -> Confusion {
    let pairs: Vec<(Class, Class)> = fold
        .repetition_predictions
        .iter()
        .map(|p| (p.predicted, p.actual))
        .collect();
    Confusion::from_pairs(&pairs)
}

/// `task,mode,accuracy,specificity,sensitivity` rows; undefined ratios are
/// written as `NA`.
pub fn summary_csv(results: &[ExperimentResult]) -> String {
    let fmt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.6}"));
    let mut out = String::from("task,mode,accuracy,specificity,sensitivity\n");
    for r in results {
        for m in [&r.repetition, &r.subject] {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.task,
                m.mode,
                fmt(m.accuracy),
                fmt(m.specificity),
                fmt(m.sensitivity)
            ));
        }
    }
    out
}
