use serde::{Deserialize, Serialize};

use super::Matrix;

/// A trainable tensor together with its accumulated gradient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamTensor {
    pub name: String,
    pub value: Matrix,
    #[serde(skip_serializing, default = "empty_matrix")]
    pub grad: Matrix,
}

fn empty_matrix() -> Matrix {
    Matrix::zeros(0, 0)
}

impl ParamTensor {
    pub fn new(name: impl Into<String>, value: Matrix) -> Self {
        let grad = Matrix::zeros(value.rows(), value.cols());
        ParamTensor {
            name: name.into(),
            value,
            grad,
        }
    }

    pub fn zero_grad(&mut self) {
        if self.grad.shape() != self.value.shape() {
            self.grad = Matrix::zeros(self.value.rows(), self.value.cols());
        } else {
            self.grad.fill(0.0);
        }
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First and second moment buffers for one parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        AdamState {
            m: vec![0.0; len],
            v: vec![0.0; len],
        }
    }

    pub fn first_moment(&self) -> &[f64] {
        &self.m
    }

    pub fn second_moment(&self) -> &[f64] {
        &self.v
    }
}

/// One bias-corrected Adam update of `param` from `param.grad`. `t` is the
/// 1-based step count.
pub fn adam_step(param: &mut ParamTensor, state: &mut AdamState, lr: f64, t: u64, cfg: AdamConfig) {
    assert!(t >= 1, "adam step count is 1-based");
    assert_eq!(
        param.grad.shape(),
        param.value.shape(),
        "grad shape mismatch for {}",
        param.name
    );
    assert_eq!(state.m.len(), param.len());
    let bc1 = 1.0 - cfg.beta1.powi(t as i32);
    let bc2 = 1.0 - cfg.beta2.powi(t as i32);
    let grads = param.grad.as_slice();
    for (((w, &g), m), v) in param
        .value
        .as_mut_slice()
        .iter_mut()
        .zip(grads)
        .zip(state.m.iter_mut())
        .zip(state.v.iter_mut())
    {
        *m = cfg.beta1 * *m + (1.0 - cfg.beta1) * g;
        *v = cfg.beta2 * *v + (1.0 - cfg.beta2) * g * g;
        let m_hat = *m / bc1;
        let v_hat = *v / bc2;
        *w -= lr * m_hat / (v_hat.sqrt() + cfg.eps);
    }
}
