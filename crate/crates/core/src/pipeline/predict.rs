use super::{Class, Repetition, Subject};
use crate::error::{Error, Result};
use crate::geometry::{frame_graph, LandmarkFrame, LandmarkSubset};
use crate::model::{model_forward, FpgModel};

/// Indices `round(j·(T−1)/(k−1))`, `j = 0..k`, rounding halves up. Repeats
/// indices when `T < k`.
pub fn sample_indices(available: usize, k: usize) -> Result<Vec<usize>> {
    if available == 0 {
        return Err(Error::EmptyInput(
            "cannot sample from an empty repetition".into(),
        ));
    }
    if k == 0 {
        return Err(Error::Config("must sample at least one frame".into()));
    }
    if k == 1 {
        return Ok(vec![0]);
    }
    let span = (available - 1) as u64;
    let denom = (k - 1) as u64;
    // integer round-half-up of j·span/denom
    Ok((0..k as u64)
        .map(|j| ((2 * j * span + denom) / (2 * denom)) as usize)
        .collect())
}

pub fn sample_frames(rep: &Repetition, k: usize) -> Result<Vec<&LandmarkFrame>> {
    let frames = rep.frames();
    Ok(sample_indices(frames.len(), k)?
        .into_iter()
        .map(|i| &frames[i])
        .collect())
}

/// Anything that assigns a class to a single frame.
pub trait FrameClassifier: Sync {
    fn classify_frame(&self, frame: &LandmarkFrame) -> Result<Class>;
}

/// Argmax over the two logits; exact ties go to HC.
pub fn class_from_logits(logits: [f64; 2]) -> Class {
    if logits[1] > logits[0] {
        Class::Als
    } else {
        Class::Hc
    }
}

pub fn predict_frame(
    frame: &LandmarkFrame,
    model: &FpgModel,
    subset: &LandmarkSubset,
) -> Result<Class> {
    let graph = frame_graph(frame, subset)?;
    let (logits, _) = model_forward(&graph, model)?;
    Ok(class_from_logits(logits))
}

/// A trained network together with the landmark subset it was trained on.
#[derive(Debug, Clone)]
pub struct FpgClassifier {
    pub model: FpgModel,
    pub subset: LandmarkSubset,
}

impl FrameClassifier for FpgClassifier {
    fn classify_frame(&self, frame: &LandmarkFrame) -> Result<Class> {
        predict_frame(frame, &self.model, &self.subset)
    }
}

/// Mode of `votes`; equal counts resolve to HC.
pub fn majority_vote(votes: &[Class]) -> Result<Class> {
    if votes.is_empty() {
        return Err(Error::EmptyInput("no votes to tally".into()));
    }
    let als = votes.iter().filter(|&&v| v == Class::Als).count();
    Ok(if 2 * als > votes.len() {
        Class::Als
    } else {
        Class::Hc
    })
}

pub fn frame_votes<C: FrameClassifier + ?Sized>(
    rep: &Repetition,
    classifier: &C,
    k: usize,
) -> Result<Vec<Class>> {
    sample_frames(rep, k)?
        .into_iter()
        .map(|f| classifier.classify_frame(f))
        .collect()
}

pub fn predict_repetition<C: FrameClassifier + ?Sized>(
    rep: &Repetition,
    classifier: &C,
    k: usize,
) -> Result<Class> {
    majority_vote(&frame_votes(rep, classifier, k)?)
}

pub fn predict_subject<C: FrameClassifier + ?Sized>(
    subject: &Subject,
    classifier: &C,
    k: usize,
) -> Result<Class> {
    let votes: Vec<Class> = subject
        .repetitions()
        .iter()
        .map(|r| predict_repetition(r, classifier, k))
        .collect::<Result<_>>()?;
    majority_vote(&votes)
}
