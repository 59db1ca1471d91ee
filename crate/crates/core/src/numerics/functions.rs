//! Scalar activations, the neighbourhood softmax and the two-class loss.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActivationConfig {
    pub leaky_slope: f64,
}

impl Default for ActivationConfig {
    fn default() -> Self {
        ActivationConfig { leaky_slope: 0.2 }
    }
}

impl ActivationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.leaky_slope > 0.0 && self.leaky_slope < 1.0) {
            return Err(Error::Config(format!(
                "leaky slope must lie in (0, 1), got {}",
                self.leaky_slope
            )));
        }
        Ok(())
    }
}

#[inline]
pub fn leaky_relu(x: f64, cfg: ActivationConfig) -> f64 {
    if x >= 0.0 {
        x
    } else {
        cfg.leaky_slope * x
    }
}

/// Derivative of [`leaky_relu`]; the subgradient at zero is 1.
#[inline]
pub fn leaky_relu_grad(x: f64, cfg: ActivationConfig) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        cfg.leaky_slope
    }
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Softmax over the entries where `mask` is true; masked-out entries are 0.
pub fn masked_softmax(logits: &[f64], mask: &[bool]) -> Result<Vec<f64>> {
    if logits.len() != mask.len() {
        return Err(Error::Dimension(format!(
            "{} logits with a mask of length {}",
            logits.len(),
            mask.len()
        )));
    }
    let max = logits
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(&l, _)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::EmptyNeighborhood);
    }
    let mut out: Vec<f64> = logits
        .iter()
        .zip(mask)
        .map(|(&l, &m)| if m { (l - max).exp() } else { 0.0 })
        .collect();
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= total);
    Ok(out)
}

/// Plain softmax over a dense slice, max-shifted.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Softmax cross-entropy for a two-logit output. Returns the loss and its
/// gradient with respect to the logits.
pub fn cross_entropy(logits: [f64; 2], label: usize) -> (f64, [f64; 2]) {
    assert!(label < 2, "label must be 0 (HC) or 1 (ALS)");
    let max = logits[0].max(logits[1]);
    let lse = max + ((logits[0] - max).exp() + (logits[1] - max).exp()).ln();
    let loss = lse - logits[label];
    let mut grad = [(logits[0] - lse).exp(), (logits[1] - lse).exp()];
    grad[label] -= 1.0;
    (loss, grad)
}
