//! The graph attention classifier: six attention layers over the facial
//! point graph, mean pooling over nodes and a two-layer linear head.

pub mod checkpoint;
pub mod gradcheck;
mod input;
mod layer;
mod network;

pub use checkpoint::Checkpoint;
pub use gradcheck::{gradient_suite, model_gradient_error, GradcheckReport};
pub use input::{GraphInput, Normalization};
pub use layer::{attention_coefficients, GatLayerParams};
pub use network::{
    forward_prepared, mean_pool_nodes, model_backward, model_forward, predict_logits, ForwardCache,
    FpgModel, Gradients, Linear, ModelConfig, ParamGroup, INPUT_DIM, NUM_CLASSES, NUM_GAT_LAYERS,
};

/// Single GAT layer forward pass without keeping the backward cache.
pub fn gat_forward(
    h: &crate::numerics::Matrix,
    layer: &GatLayerParams,
    graph: &GraphInput,
    act: crate::numerics::ActivationConfig,
) -> crate::Result<crate::numerics::Matrix> {
    layer::gat_forward(h, layer, graph, act).map(|c| c.output)
}
