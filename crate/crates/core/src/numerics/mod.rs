//! Dense linear algebra and the training primitives built on it.

pub mod functions;
pub mod gradcheck;
mod matrix;
pub mod optim;

pub use functions::{
    cross_entropy, leaky_relu, leaky_relu_grad, masked_softmax, sigmoid, softmax, ActivationConfig,
};
pub use gradcheck::{finite_diff_grad, relative_error};
pub use matrix::{dot, matmul, Matrix};
pub use optim::{adam_step, AdamConfig, AdamState, ParamTensor};
