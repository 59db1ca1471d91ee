//! Dataset hierarchy, frame sampling, the training loop and the
//! frame → repetition → subject prediction cascade.

mod data;
mod predict;
mod train;

pub use data::{Class, Dataset, Repetition, Subject, Task};
pub use predict::{
    class_from_logits, frame_votes, majority_vote, predict_frame, predict_repetition,
    predict_subject, sample_frames, sample_indices, FpgClassifier, FrameClassifier,
};
pub use train::{
    evaluate_samples, prepare_samples, train, train_samples, EarlyStopping, EpochRecord, Sample,
    StopDecision, TrainConfig, TrainHistory,
};
