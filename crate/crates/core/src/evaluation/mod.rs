//! Leave-one-subject-out evaluation and classification metrics.

mod loso;
mod metrics;

pub use loso::{
    aggregate, fold_confusion, holdout_split, loso_folds, run_experiment, run_experiment_with,
    run_fold, summary_csv, ExperimentResult, FoldPlan, FoldResult, FoldTrainer, GatTrainer,
    RepetitionPrediction, SubjectPrediction,
};
pub use metrics::{compute_metrics, Confusion, MetricsReport, Mode};
