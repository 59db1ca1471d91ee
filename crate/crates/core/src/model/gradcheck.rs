//! Finite-difference audit of the full network gradient.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::network::{model_backward, model_forward, FpgModel, ModelConfig};
use crate::error::Result;
use crate::geometry::{build_face_graph, FaceGraph, Point2D, NUM_GRAPH_NODES};
use crate::numerics::{cross_entropy, finite_diff_grad, relative_error, ParamTensor};
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradcheckReport {
    pub seed: u64,
    pub edge_weight_in_attention: bool,
    pub relative_error: f64,
}

/// Relative error between the analytic cross-entropy gradient and central
/// differences with step `h`, over every parameter of `model`.
pub fn model_gradient_error(
    model: &FpgModel,
    graph: &FaceGraph,
    label: usize,
    h: f64,
) -> Result<f64> {
    let (logits, cache) = model_forward(graph, model)?;
    let (_, dlogits) = cross_entropy(logits, label);
    let analytic = model_backward(model, &cache, dlogits)?;

    let mut params: Vec<ParamTensor> = model.params().into_iter().cloned().collect();
    let mut scratch = model.clone();
    let mut failure = None;
    let numeric = finite_diff_grad(
        |ps| {
            let run = scratch
                .load_params(ps)
                .and_then(|_| model_forward(graph, &scratch));
            match run {
                Ok((l, _)) => cross_entropy(l, label).0,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        &mut params,
        h,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(relative_error(&analytic.0, &numeric))
}

/// `instances` random (graph, model, label) triples derived from `seed`:
/// 26 uniform points in the 200 px crop with a random hub, default model
/// configuration, alternating the edge-length attention feature.
pub fn gradient_suite(seed: u64, instances: usize, h: f64) -> Result<Vec<GradcheckReport>> {
    (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let points: Vec<Point2D> = (0..NUM_GRAPH_NODES)
                .map(|_| Point2D::new(rng.gen_range(0.0..200.0), rng.gen_range(0.0..200.0)))
                .collect();
            let graph = build_face_graph(&points, rng.gen_range(0..NUM_GRAPH_NODES))?;
            let edge = i % 2 == 0;
            let model = FpgModel::new(
                ModelConfig {
                    edge_weight_in_attention: edge,
                    ..ModelConfig::default()
                },
                s,
            )?;
            let label = rng.gen_range(0..2);
            Ok(GradcheckReport {
                seed: s,
                edge_weight_in_attention: edge,
                relative_error: model_gradient_error(&model, &graph, label, h)?,
            })
        })
        .collect()
}
