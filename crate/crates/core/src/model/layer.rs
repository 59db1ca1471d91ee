//! A single-head graph attention layer with sigmoid output and its
//! hand-derived backward pass.

use rand::Rng;

use super::input::{Adjacency, GraphInput};
use crate::error::{Error, Result};
use crate::numerics::{
    dot, leaky_relu, leaky_relu_grad, sigmoid, ActivationConfig, Matrix, ParamTensor,
};

#[derive(Debug, Clone, PartialEq)]
pub struct GatLayerParams {
    /// `n' × n` projection.
    pub weight: ParamTensor,
    /// `1 × (2n' [+1])` attention vector: receiver half, sender half and,
    /// when enabled, one coefficient for the edge length.
    pub attention: ParamTensor,
}

impl GatLayerParams {
    pub fn new(weight: ParamTensor, attention: ParamTensor) -> Result<Self> {
        let n_out = weight.value.rows();
        let len = attention.value.cols();
        if attention.value.rows() != 1 || (len != 2 * n_out && len != 2 * n_out + 1) {
            return Err(Error::Dimension(format!(
                "attention vector {:?} does not fit output width {n_out}",
                attention.value.shape()
            )));
        }
        Ok(GatLayerParams { weight, attention })
    }

    /// Glorot-uniform projection (bound multiplied by `gain`) and a uniform
    /// attention vector scaled by `1/√len`.
    pub fn init<R: Rng>(
        name: &str,
        in_dim: usize,
        out_dim: usize,
        edge_feature: bool,
        gain: f64,
        rng: &mut R,
    ) -> Self {
        let bound = gain * (6.0 / (in_dim + out_dim) as f64).sqrt();
        let weight = Matrix::from_fn(out_dim, in_dim, |_, _| rng.gen_range(-bound..bound));
        let len = 2 * out_dim + usize::from(edge_feature);
        let a_bound = 1.0 / (len as f64).sqrt();
        let attention = Matrix::from_fn(1, len, |_, _| rng.gen_range(-a_bound..a_bound));
        GatLayerParams {
            weight: ParamTensor::new(format!("{name}.weight"), weight),
            attention: ParamTensor::new(format!("{name}.attention"), attention),
        }
    }

    pub fn in_dim(&self) -> usize {
        self.weight.value.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.weight.value.rows()
    }

    pub fn uses_edge_weight(&self) -> bool {
        self.attention.value.cols() == 2 * self.out_dim() + 1
    }

    fn split_attention(&self) -> (&[f64], &[f64], f64) {
        let a = self.attention.value.as_slice();
        let n = self.out_dim();
        let edge = if self.uses_edge_weight() {
            a[2 * n]
        } else {
            0.0
        };
        (&a[..n], &a[n..2 * n], edge)
    }
}

/// Intermediates of one layer; attention entries are laid out like the
/// graph's adjacency rows.
#[derive(Debug, Clone)]
pub(crate) struct LayerCache {
    /// `H Wᵀ`, one projected row per node.
    pub projected: Matrix,
    /// Pre-activation attention logits.
    pub scores: Vec<f64>,
    pub alpha: Vec<f64>,
    pub output: Matrix,
}

pub(crate) struct LayerGrads {
    pub weight: Matrix,
    pub attention: Matrix,
    pub input: Matrix,
}

fn check_input(h: &Matrix, layer: &GatLayerParams, graph: &GraphInput) -> Result<()> {
    if h.cols() != layer.in_dim() {
        return Err(Error::Dimension(format!(
            "features have width {}, layer expects {}",
            h.cols(),
            layer.in_dim()
        )));
    }
    if h.rows() != graph.num_nodes() {
        return Err(Error::Dimension(format!(
            "{} feature rows for a graph of {} nodes",
            h.rows(),
            graph.num_nodes()
        )));
    }
    Ok(())
}

fn project(h: &Matrix, w: &Matrix) -> Matrix {
    let wt = w.transpose();
    let mut z = Matrix::zeros(h.rows(), w.rows());
    for u in 0..h.rows() {
        let out = z.row_mut(u);
        for (i, &hi) in h.row(u).iter().enumerate() {
            for (o, &wij) in out.iter_mut().zip(wt.row(i)) {
                *o += hi * wij;
            }
        }
    }
    z
}

/// Attention logits and coefficients for every adjacency entry.
fn attend(
    projected: &Matrix,
    layer: &GatLayerParams,
    adj: &Adjacency,
    act: ActivationConfig,
) -> (Vec<f64>, Vec<f64>) {
    let (a_recv, a_send, a_edge) = layer.split_attention();
    let send: Vec<f64> = (0..projected.rows())
        .map(|v| dot(a_send, projected.row(v)))
        .collect();
    let mut scores = Vec::with_capacity(adj.entries.len());
    let mut alpha = Vec::with_capacity(adj.entries.len());
    for u in 0..adj.num_nodes() {
        let recv = dot(a_recv, projected.row(u));
        let start = alpha.len();
        let mut max = f64::NEG_INFINITY;
        for &(v, w) in adj.row(u) {
            let e = recv + send[v] + a_edge * w;
            scores.push(e);
            let s = leaky_relu(e, act);
            max = max.max(s);
            alpha.push(s);
        }
        let row = &mut alpha[start..];
        let mut total = 0.0;
        for a in row.iter_mut() {
            *a = (*a - max).exp();
            total += *a;
        }
        row.iter_mut().for_each(|a| *a /= total);
    }
    (scores, alpha)
}

/// Dense `N × N` attention matrix; row `u` holds `α_{v→u}` over the closed
/// neighbourhood of `u`.
pub fn attention_coefficients(
    h: &Matrix,
    layer: &GatLayerParams,
    graph: &GraphInput,
    act: ActivationConfig,
) -> Result<Matrix> {
    check_input(h, layer, graph)?;
    let z = project(h, &layer.weight.value);
    let adj = graph.adjacency();
    let (_, alpha) = attend(&z, layer, adj, act);
    let n = graph.num_nodes();
    let mut dense = Matrix::zeros(n, n);
    for u in 0..n {
        let range = adj.offsets[u]..adj.offsets[u + 1];
        for (&(v, _), &a) in adj.entries[range.clone()].iter().zip(&alpha[range]) {
            dense[(u, v)] = a;
        }
    }
    Ok(dense)
}

pub(crate) fn gat_forward(
    h: &Matrix,
    layer: &GatLayerParams,
    graph: &GraphInput,
    act: ActivationConfig,
) -> Result<LayerCache> {
    check_input(h, layer, graph)?;
    let adj = graph.adjacency();
    let projected = project(h, &layer.weight.value);
    let (scores, alpha) = attend(&projected, layer, adj, act);
    let d = layer.out_dim();
    let mut output = Matrix::zeros(h.rows(), d);
    for u in 0..adj.num_nodes() {
        let range = adj.offsets[u]..adj.offsets[u + 1];
        let out = output.row_mut(u);
        for (&(v, _), &a) in adj.entries[range.clone()].iter().zip(&alpha[range]) {
            for (m, z) in out.iter_mut().zip(projected.row(v)) {
                *m += a * z;
            }
        }
        out.iter_mut().for_each(|m| *m = sigmoid(*m));
    }
    Ok(LayerCache {
        projected,
        scores,
        alpha,
        output,
    })
}

/// Backpropagates `grad_output` through one layer whose forward input was
/// `input`.
pub(crate) fn gat_backward(
    input: &Matrix,
    cache: &LayerCache,
    layer: &GatLayerParams,
    adj: &Adjacency,
    grad_output: &Matrix,
    act: ActivationConfig,
) -> LayerGrads {
    let n = input.rows();
    let d = layer.out_dim();
    let (a_recv, a_send, _) = layer.split_attention();
    let edge_feature = layer.uses_edge_weight();
    let z = &cache.projected;

    let mut d_proj = Matrix::zeros(n, d);
    let mut d_recv = vec![0.0; d];
    let mut d_send = vec![0.0; d];
    let mut d_edge = 0.0;

    let mut d_msg = vec![0.0; d];
    let mut d_alpha = Vec::new();
    for u in 0..n {
        // through the sigmoid
        for ((dm, &g), &y) in d_msg
            .iter_mut()
            .zip(grad_output.row(u))
            .zip(cache.output.row(u))
        {
            *dm = g * y * (1.0 - y);
        }
        let range = adj.offsets[u]..adj.offsets[u + 1];
        let nb = &adj.entries[range.clone()];
        let alpha = &cache.alpha[range.clone()];
        let scores = &cache.scores[range];
        // message term: d z_v += α_uv · dm_u ; dα_uv = dm_u · z_v
        d_alpha.clear();
        for (&(v, _), &a) in nb.iter().zip(alpha) {
            d_alpha.push(dot(&d_msg, z.row(v)));
            for (dz, &dm) in d_proj.row_mut(v).iter_mut().zip(&d_msg) {
                *dz += a * dm;
            }
        }
        // softmax then LeakyReLU
        let weighted: f64 = alpha.iter().zip(&d_alpha).map(|(a, g)| a * g).sum();
        let mut d_e_recv = 0.0;
        for (k, &(v, w)) in nb.iter().enumerate() {
            let d_score = alpha[k] * (d_alpha[k] - weighted);
            let d_e = d_score * leaky_relu_grad(scores[k], act);
            if d_e == 0.0 {
                continue;
            }
            d_e_recv += d_e;
            for (ds, &zv) in d_send.iter_mut().zip(z.row(v)) {
                *ds += d_e * zv;
            }
            d_edge += d_e * w;
            for (dz, &a) in d_proj.row_mut(v).iter_mut().zip(a_send) {
                *dz += d_e * a;
            }
        }
        if d_e_recv != 0.0 {
            for (dr, &zu) in d_recv.iter_mut().zip(z.row(u)) {
                *dr += d_e_recv * zu;
            }
            for (dz, &a) in d_proj.row_mut(u).iter_mut().zip(a_recv) {
                *dz += d_e_recv * a;
            }
        }
    }

    let mut weight = Matrix::zeros(d, layer.in_dim());
    let mut grad_input = Matrix::zeros(n, layer.in_dim());
    let w = &layer.weight.value;
    for u in 0..n {
        let dz = d_proj.row(u);
        weight.add_outer(dz, input.row(u));
        let back = grad_input.row_mut(u);
        for (i, &g) in dz.iter().enumerate() {
            if g != 0.0 {
                for (b, &wij) in back.iter_mut().zip(w.row(i)) {
                    *b += g * wij;
                }
            }
        }
    }

    let mut attention = Vec::with_capacity(layer.attention.value.cols());
    attention.extend_from_slice(&d_recv);
    attention.extend_from_slice(&d_send);
    if edge_feature {
        attention.push(d_edge);
    }
    let attention = Matrix::from_vec(1, attention.len(), attention).expect("finite gradients");

    LayerGrads {
        weight,
        attention,
        input: grad_input,
    }
}
