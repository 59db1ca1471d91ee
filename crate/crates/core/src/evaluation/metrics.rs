use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::Class;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Repetition,
    Subject,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Repetition => "repetition",
            Mode::Subject => "subject",
        })
    }
}

/// Confusion counts with ALS as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn from_pairs(pairs: &[(Class, Class)]) -> Self {
        let mut c = Confusion::default();
        for &(pred, actual) in pairs {
            match (pred, actual) {
                (Class::Als, Class::Als) => c.tp += 1,
                (Class::Hc, Class::Hc) => c.tn += 1,
                (Class::Als, Class::Hc) => c.fp += 1,
                (Class::Hc, Class::Als) => c.fn_ += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn merge(&self, other: &Confusion) -> Confusion {
        Confusion {
            tp: self.tp + other.tp,
            tn: self.tn + other.tn,
            fp: self.fp + other.fp,
            fn_: self.fn_ + other.fn_,
        }
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Accuracy, sensitivity and specificity. A ratio with an empty denominator
/// is `None` (serialised as `null`), never 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mode: Mode,
    pub accuracy: Option<f64>,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub confusion: Confusion,
}

impl MetricsReport {
    pub fn from_confusion(mode: Mode, c: Confusion) -> Self {
        MetricsReport {
            mode,
            accuracy: ratio(c.tp + c.tn, c.total()),
            sensitivity: ratio(c.tp, c.tp + c.fn_),
            specificity: ratio(c.tn, c.tn + c.fp),
            confusion: c,
        }
    }
}

/// Metrics over `(predicted, actual)` pairs.
pub fn compute_metrics(mode: Mode, predictions: &[(Class, Class)]) -> Result<MetricsReport> {
    if predictions.is_empty() {
        return Err(Error::EmptyInput("no predictions to score".into()));
    }
    Ok(MetricsReport::from_confusion(
        mode,
        Confusion::from_pairs(predictions),
    ))
}
