use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::input::{Adjacency, GraphInput, Normalization};
use super::layer::{gat_backward, gat_forward, GatLayerParams, LayerCache};
use crate::error::{Error, Result};
use crate::geometry::FaceGraph;
use crate::numerics::{leaky_relu, leaky_relu_grad, ActivationConfig, Matrix, ParamTensor};

pub const NUM_GAT_LAYERS: usize = 6;
pub const NUM_CLASSES: usize = 2;
pub const INPUT_DIM: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub hidden_dim: usize,
    pub activation: ActivationConfig,
    /// Append the normalised edge length to the attention input.
    pub edge_weight_in_attention: bool,
    pub normalization: Normalization,
    /// Multiplier on the Glorot bound of the attention-layer projections.
    pub init_gain: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            hidden_dim: 17,
            activation: ActivationConfig::default(),
            edge_weight_in_attention: true,
            normalization: Normalization::default(),
            init_gain: 1.0,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_dim == 0 {
            return Err(Error::Config("hidden_dim must be positive".into()));
        }
        self.activation.validate()?;
        let n = self.normalization;
        if !(n.coord_scale > 0.0 && n.edge_scale > 0.0) || !n.coord_offset.is_finite() {
            return Err(Error::Config(
                "normalisation scales must be positive".into(),
            ));
        }
        if !(self.init_gain > 0.0 && self.init_gain.is_finite()) {
            return Err(Error::Config("init_gain must be positive".into()));
        }
        Ok(())
    }
}

/// Dense layer `y = W x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Linear {
    pub weight: ParamTensor,
    pub bias: ParamTensor,
}

impl Linear {
    fn init<R: Rng>(name: &str, in_dim: usize, out_dim: usize, rng: &mut R) -> Self {
        let bound = (6.0 / (in_dim + out_dim) as f64).sqrt();
        Linear {
            weight: ParamTensor::new(
                format!("{name}.weight"),
                Matrix::from_fn(out_dim, in_dim, |_, _| rng.gen_range(-bound..bound)),
            ),
            bias: ParamTensor::new(format!("{name}.bias"), Matrix::zeros(out_dim, 1)),
        }
    }

    fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.weight.value.matvec(x).expect("linear input width");
        for (o, b) in y.iter_mut().zip(self.bias.value.as_slice()) {
            *o += b;
        }
        y
    }
}

/// Whether a parameter belongs to the attention layers or the linear head;
/// the two groups train with different learning rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamGroup {
    Gat,
    Linear,
}

/// Six GAT layers, node-average pooling and a two-layer linear head.
#[derive(Debug, Clone, PartialEq)]
pub struct FpgModel {
    config: ModelConfig,
    gat_layers: Vec<GatLayerParams>,
    linear1: Linear,
    linear2: Linear,
    version: u64,
}

/// Intermediates of one forward pass, consumed by [`model_backward`].
#[derive(Debug, Clone)]
pub struct ForwardCache {
    version: u64,
    features: Matrix,
    adjacency: Arc<Adjacency>,
    layers: Vec<LayerCache>,
    pooled: Vec<f64>,
    hidden_pre: Vec<f64>,
    hidden: Vec<f64>,
    num_nodes: usize,
}

/// Gradients aligned with [`FpgModel::params`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients(pub Vec<Matrix>);

impl Gradients {
    pub fn add_assign(&mut self, other: &Gradients) -> Result<()> {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            a.add_assign(b)?;
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: f64) {
        self.0.iter_mut().for_each(|m| m.scale(factor));
    }
}

impl FpgModel {
    pub fn new(config: ModelConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = config.hidden_dim;
        let gat_layers = (0..NUM_GAT_LAYERS)
            .map(|i| {
                let in_dim = if i == 0 { INPUT_DIM } else { d };
                GatLayerParams::init(
                    &format!("gat{i}"),
                    in_dim,
                    d,
                    config.edge_weight_in_attention,
                    config.init_gain,
                    &mut rng,
                )
            })
            .collect();
        let linear1 = Linear::init("linear1", d, d, &mut rng);
        let linear2 = Linear::init("linear2", d, NUM_CLASSES, &mut rng);
        Ok(FpgModel {
            config,
            gat_layers,
            linear1,
            linear2,
            version: 0,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn gat_layers(&self) -> &[GatLayerParams] {
        &self.gat_layers
    }

    pub fn params(&self) -> Vec<&ParamTensor> {
        let mut out = Vec::with_capacity(2 * NUM_GAT_LAYERS + 4);
        for l in &self.gat_layers {
            out.push(&l.weight);
            out.push(&l.attention);
        }
        out.extend([
            &self.linear1.weight,
            &self.linear1.bias,
            &self.linear2.weight,
            &self.linear2.bias,
        ]);
        out
    }

    /// Mutable access to every parameter. Invalidates outstanding forward
    /// caches.
    pub fn params_mut(&mut self) -> Vec<&mut ParamTensor> {
        self.version += 1;
        let mut out = Vec::with_capacity(2 * NUM_GAT_LAYERS + 4);
        for l in &mut self.gat_layers {
            out.push(&mut l.weight);
            out.push(&mut l.attention);
        }
        out.extend([
            &mut self.linear1.weight,
            &mut self.linear1.bias,
            &mut self.linear2.weight,
            &mut self.linear2.bias,
        ]);
        out
    }

    pub fn param_groups(&self) -> Vec<ParamGroup> {
        let mut groups = vec![ParamGroup::Gat; 2 * NUM_GAT_LAYERS];
        groups.extend([ParamGroup::Linear; 4]);
        groups
    }

    pub fn num_scalars(&self) -> usize {
        self.params().iter().map(|p| p.len()).sum()
    }

    /// Replace all parameter values. Names and shapes must match.
    pub fn load_params(&mut self, values: &[ParamTensor]) -> Result<()> {
        let mut targets = self.params_mut();
        if targets.len() != values.len() {
            return Err(Error::Dimension(format!(
                "expected {} parameter tensors, got {}",
                targets.len(),
                values.len()
            )));
        }
        for (t, v) in targets.iter_mut().zip(values) {
            if t.name != v.name || t.value.shape() != v.value.shape() {
                return Err(Error::Dimension(format!(
                    "parameter {} {:?} does not match {} {:?}",
                    v.name,
                    v.value.shape(),
                    t.name,
                    t.value.shape()
                )));
            }
            t.value = v.value.clone();
        }
        Ok(())
    }

    pub fn zeroed_gradients(&self) -> Gradients {
        Gradients(
            self.params()
                .iter()
                .map(|p| Matrix::zeros(p.value.rows(), p.value.cols()))
                .collect(),
        )
    }

    pub fn prepare(&self, graph: &FaceGraph) -> Result<GraphInput> {
        GraphInput::new(graph, self.config.normalization)
    }
}

/// Column-wise mean over the node rows.
pub fn mean_pool_nodes(h: &Matrix) -> Result<Vec<f64>> {
    if h.rows() == 0 {
        return Err(Error::EmptyInput("cannot pool an empty node set".into()));
    }
    let mut out = vec![0.0; h.cols()];
    for u in 0..h.rows() {
        for (o, v) in out.iter_mut().zip(h.row(u)) {
            *o += v;
        }
    }
    let n = h.rows() as f64;
    out.iter_mut().for_each(|v| *v /= n);
    Ok(out)
}

pub fn model_forward(graph: &FaceGraph, model: &FpgModel) -> Result<([f64; 2], ForwardCache)> {
    forward_prepared(&model.prepare(graph)?, model)
}

/// Forward pass on an already prepared graph.
pub fn forward_prepared(input: &GraphInput, model: &FpgModel) -> Result<([f64; 2], ForwardCache)> {
    let act = model.config.activation;
    let mut layers: Vec<LayerCache> = Vec::with_capacity(NUM_GAT_LAYERS);
    for layer in &model.gat_layers {
        let h = layers.last().map_or(input.features(), |c| &c.output);
        let cache = gat_forward(h, layer, input, act)?;
        layers.push(cache);
    }
    let pooled = mean_pool_nodes(layers.last().map_or(input.features(), |c| &c.output))?;
    let hidden_pre = model.linear1.forward(&pooled);
    let hidden: Vec<f64> = hidden_pre.iter().map(|&x| leaky_relu(x, act)).collect();
    let out = model.linear2.forward(&hidden);
    let logits = [out[0], out[1]];
    Ok((
        logits,
        ForwardCache {
            version: model.version,
            features: input.features().clone(),
            adjacency: Arc::clone(input.adjacency()),
            layers,
            pooled,
            hidden_pre,
            hidden,
            num_nodes: input.num_nodes(),
        },
    ))
}

/// Logits only, without keeping intermediates.
pub fn predict_logits(input: &GraphInput, model: &FpgModel) -> Result<[f64; 2]> {
    forward_prepared(input, model).map(|(l, _)| l)
}

/// Gradients of `grad_logits · logits` with respect to every parameter.
pub fn model_backward(
    model: &FpgModel,
    cache: &ForwardCache,
    grad_logits: [f64; 2],
) -> Result<Gradients> {
    if cache.version != model.version || cache.layers.len() != model.gat_layers.len() {
        return Err(Error::StaleCache);
    }
    let act = model.config.activation;
    let d = model.config.hidden_dim;

    let mut w2 = Matrix::zeros(NUM_CLASSES, d);
    w2.add_outer(&grad_logits, &cache.hidden);
    let b2 = Matrix::from_vec(NUM_CLASSES, 1, grad_logits.to_vec())?;
    let d_hidden = model.linear2.weight.value.matvec_t(&grad_logits)?;
    let d_pre: Vec<f64> = d_hidden
        .iter()
        .zip(&cache.hidden_pre)
        .map(|(g, &x)| g * leaky_relu_grad(x, act))
        .collect();
    let mut w1 = Matrix::zeros(d, d);
    w1.add_outer(&d_pre, &cache.pooled);
    let b1 = Matrix::from_vec(d, 1, d_pre.clone())?;
    let d_pooled = model.linear1.weight.value.matvec_t(&d_pre)?;

    let n = cache.num_nodes as f64;
    let mut grad_h = Matrix::from_fn(cache.num_nodes, d, |_, j| d_pooled[j] / n);
    let mut layer_grads = Vec::with_capacity(NUM_GAT_LAYERS);
    for (l, (layer, lc)) in model.gat_layers.iter().zip(&cache.layers).enumerate().rev() {
        let input = if l == 0 {
            &cache.features
        } else {
            &cache.layers[l - 1].output
        };
        let g = gat_backward(input, lc, layer, &cache.adjacency, &grad_h, act);
        grad_h = g.input;
        layer_grads.push((g.weight, g.attention));
    }
    layer_grads.reverse();

    let mut out = Vec::with_capacity(2 * NUM_GAT_LAYERS + 4);
    for (w, a) in layer_grads {
        out.push(w);
        out.push(a);
    }
    out.extend([w1, b1, w2, b2]);
    Ok(Gradients(out))
}
