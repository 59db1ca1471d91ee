use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::predict::{class_from_logits, sample_frames};
use super::{Class, Repetition};
use crate::error::{Error, Result};
use crate::geometry::{frame_graph, LandmarkSubset};
use crate::model::{forward_prepared, model_backward, FpgModel, Gradients, GraphInput, ParamGroup};
use crate::numerics::{adam_step, cross_entropy, AdamConfig, AdamState};
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub max_epochs: usize,
    pub batch_size: usize,
    pub lr_gat: f64,
    pub lr_linear: f64,
    pub patience: usize,
    pub frames_per_repetition: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_epochs: 100,
            batch_size: 64,
            lr_gat: 1e-4,
            lr_linear: 1e-5,
            patience: 10,
            frames_per_repetition: 15,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("max_epochs", self.max_epochs),
            ("batch_size", self.batch_size),
            ("patience", self.patience),
            ("frames_per_repetition", self.frames_per_repetition),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("{name} must be positive")));
        }
        if self.frames_per_repetition.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "frames_per_repetition must be odd, got {}",
                self.frames_per_repetition
            )));
        }
        for (name, lr) in [("lr_gat", self.lr_gat), ("lr_linear", self.lr_linear)] {
            if !(lr.is_finite() && lr >= 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be finite and non-negative"
                )));
            }
        }
        Ok(())
    }
}

/// A prepared frame graph with its repetition's label.
#[derive(Debug, Clone)]
pub struct Sample {
    pub input: GraphInput,
    pub label: Class,
}

/// Sample `k` frames per repetition and build their graphs.
pub fn prepare_samples(
    reps: &[&Repetition],
    subset: &LandmarkSubset,
    model: &FpgModel,
    k: usize,
) -> Result<Vec<Sample>> {
    let mut out = Vec::with_capacity(reps.len() * k);
    for rep in reps {
        for frame in sample_frames(rep, k)? {
            let graph = frame_graph(frame, subset)?;
            out.push(Sample {
                input: model.prepare(&graph)?,
                label: rep.label,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    pub val_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
    /// Epoch whose weights were returned.
    pub best_epoch: usize,
    pub stopped_early: bool,
}

impl TrainHistory {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("epoch,train_loss,val_loss,val_accuracy\n");
        for r in &self.epochs {
            s.push_str(&format!(
                "{},{},{},{}\n",
                r.epoch, r.train_loss, r.val_loss, r.val_accuracy
            ));
        }
        s
    }
}

/// Patience-based stopping on validation loss.
#[derive(Debug, Clone)]
pub struct EarlyStopping {
    patience: usize,
    best: f64,
    since_best: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopDecision {
    Improved,
    Continue,
    Stop,
}

impl EarlyStopping {
    pub fn new(patience: usize) -> Self {
        EarlyStopping {
            patience,
            best: f64::INFINITY,
            since_best: 0,
        }
    }

    pub fn observe(&mut self, val_loss: f64) -> StopDecision {
        if val_loss < self.best {
            self.best = val_loss;
            self.since_best = 0;
            StopDecision::Improved
        } else {
            self.since_best += 1;
            if self.since_best >= self.patience {
                StopDecision::Stop
            } else {
                StopDecision::Continue
            }
        }
    }

    pub fn best(&self) -> f64 {
        self.best
    }
}

/// Loss and gradient of one sample.
fn sample_gradient(model: &FpgModel, sample: &Sample) -> Result<(f64, Gradients)> {
    let (logits, cache) = forward_prepared(&sample.input, model)?;
    let (loss, dlogits) = cross_entropy(logits, sample.label.index());
    Ok((loss, model_backward(model, &cache, dlogits)?))
}

/// Mean cross-entropy and frame accuracy over `samples`.
pub fn evaluate_samples(model: &FpgModel, samples: &[Sample]) -> Result<(f64, f64)> {
    let scored: Vec<(f64, bool)> = samples
        .par_iter()
        .map(|s| {
            let (logits, _) = forward_prepared(&s.input, model)?;
            let (loss, _) = cross_entropy(logits, s.label.index());
            Ok((loss, class_from_logits(logits) == s.label))
        })
        .collect::<Result<_>>()?;
    let n = scored.len() as f64;
    let loss = scored.iter().map(|(l, _)| l).sum::<f64>() / n;
    let acc = scored.iter().filter(|(_, ok)| *ok).count() as f64 / n;
    Ok((loss, acc))
}

/// Mini-batch Adam on prepared samples with early stopping on validation
/// loss. Returns the weights of the best validation epoch.
pub fn train_samples(
    mut model: FpgModel,
    train: &[Sample],
    val: &[Sample],
    cfg: &TrainConfig,
) -> Result<(FpgModel, TrainHistory)> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(Error::Config("training set is empty".into()));
    }
    if val.is_empty() {
        return Err(Error::Config("validation set is empty".into()));
    }
    let groups = model.param_groups();
    let mut states: Vec<AdamState> = model
        .params()
        .iter()
        .map(|p| AdamState::new(p.len()))
        .collect();
    let adam = AdamConfig::default();
    let mut step = 0u64;

    let mut stopper = EarlyStopping::new(cfg.patience);
    let mut best_model = model.clone();
    let mut history = TrainHistory::default();
    let mut order: Vec<usize> = (0..train.len()).collect();

    for epoch in 1..=cfg.max_epochs {
        order.sort_unstable();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(
            cfg.seed,
            epoch as u64,
        )));
        let mut epoch_loss = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let per_sample: Vec<(f64, Gradients)> = batch
                .par_iter()
                .map(|&i| sample_gradient(&model, &train[i]))
                .collect::<Result<_>>()?;
            // merged in batch order, independent of worker scheduling
            let mut total = model.zeroed_gradients();
            for (loss, g) in &per_sample {
                epoch_loss += loss;
                total.add_assign(g)?;
            }
            total.scale(1.0 / batch.len() as f64);

            step += 1;
            for (((param, grad), state), group) in model
                .params_mut()
                .into_iter()
                .zip(total.0)
                .zip(states.iter_mut())
                .zip(&groups)
            {
                param.grad = grad;
                let lr = match group {
                    ParamGroup::Gat => cfg.lr_gat,
                    ParamGroup::Linear => cfg.lr_linear,
                };
                adam_step(param, state, lr, step, adam);
            }
        }

        let (val_loss, val_accuracy) = evaluate_samples(&model, val)?;
        history.epochs.push(EpochRecord {
            epoch,
            train_loss: epoch_loss / train.len() as f64,
            val_loss,
            val_accuracy,
        });
        match stopper.observe(val_loss) {
            StopDecision::Improved => {
                best_model = model.clone();
                history.best_epoch = epoch;
            }
            StopDecision::Continue => {}
            StopDecision::Stop => {
                history.stopped_early = epoch < cfg.max_epochs;
                break;
            }
        }
    }
    Ok((best_model, history))
}

/// Train on repetitions: sample frames, build graphs, run [`train_samples`].
pub fn train(
    model: FpgModel,
    subset: &LandmarkSubset,
    train_set: &[&Repetition],
    val_set: &[&Repetition],
    cfg: &TrainConfig,
) -> Result<(FpgModel, TrainHistory)> {
    cfg.validate()?;
    let k = cfg.frames_per_repetition;
    let train_samples_ = prepare_samples(train_set, subset, &model, k)?;
    let val_samples = prepare_samples(val_set, subset, &model, k)?;
    train_samples(model, &train_samples_, &val_samples, cfg)
}
