mod common;

use common::*;
use fpg_core::geometry::{FaceGraph, Point2D};
use fpg_core::model::{
    attention_coefficients, gat_forward, mean_pool_nodes, model_backward, model_forward, FpgModel,
    GatLayerParams, GraphInput, ModelConfig, Normalization,
};
use fpg_core::numerics::gradcheck::DEFAULT_STEP;
use fpg_core::numerics::{
    cross_entropy, finite_diff_grad, relative_error, sigmoid, ActivationConfig, Matrix, ParamTensor,
};
use fpg_core::Error;
use rand::Rng;

fn act() -> ActivationConfig {
    ActivationConfig::default()
}

fn random_features(seed: u64, rows: usize, cols: usize) -> Matrix {
    let mut r = rng(seed);
    Matrix::from_fn(rows, cols, |_, _| r.gen_range(-1.0..1.0))
}

/// Attention logits and coefficients written out entry by entry.
fn scalar_attention(h: &Matrix, layer: &GatLayerParams, g: &FaceGraph) -> Matrix {
    let w = &layer.weight.value;
    let a = layer.attention.value.as_slice();
    let (n_out, n_in) = (w.rows(), w.cols());
    let project = |u: usize| -> Vec<f64> {
        (0..n_out)
            .map(|i| {
                let mut s = 0.0;
                for j in 0..n_in {
                    s += w[(i, j)] * h[(u, j)];
                }
                s
            })
            .collect()
    };
    let n = g.num_nodes();
    let edge_scale = Normalization::default().edge_scale;
    let mut alpha = Matrix::zeros(n, n);
    for u in 0..n {
        let zu = project(u);
        let mut closed: Vec<(usize, f64)> = g.neighbors(u).to_vec();
        closed.push((u, 0.0));
        let mut logits = Vec::new();
        for &(v, weight) in &closed {
            let zv = project(v);
            let mut e = 0.0;
            for i in 0..n_out {
                e += a[i] * zu[i];
                e += a[n_out + i] * zv[i];
            }
            if a.len() == 2 * n_out + 1 {
                e += a[2 * n_out] * weight / edge_scale;
            }
            logits.push(if e >= 0.0 { e } else { 0.2 * e });
        }
        let denom: f64 = logits.iter().map(|l| l.exp()).sum();
        for (&(v, _), l) in closed.iter().zip(&logits) {
            alpha[(u, v)] = l.exp() / denom;
        }
    }
    alpha
}

fn layer_for(seed: u64, n_in: usize, n_out: usize, edge: bool) -> GatLayerParams {
    GatLayerParams::init("t", n_in, n_out, edge, 1.0, &mut rng(seed))
}

#[test]
fn attention_matches_scalar_oracle() {
    for seed in 0..10 {
        let g = random_small_graph(seed, 5);
        let input = GraphInput::new(&g, Normalization::default()).unwrap();
        for edge in [true, false] {
            let layer = layer_for(seed + 100, 3, 4, edge);
            let h = random_features(seed + 200, 5, 3);
            let fast = attention_coefficients(&h, &layer, &input, act()).unwrap();
            let slow = scalar_attention(&h, &layer, &g);
            for u in 0..5 {
                for v in 0..5 {
                    assert!((fast[(u, v)] - slow[(u, v)]).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn attention_rows_are_normalised_and_supported_on_neighbourhoods() {
    for seed in 0..20 {
        let g = random_face_graph(seed);
        let input = GraphInput::new(&g, Normalization::default()).unwrap();
        let layer = layer_for(seed, 2, 17, true);
        let alpha = attention_coefficients(input.features(), &layer, &input, act()).unwrap();
        for u in 0..26 {
            let row_sum: f64 = alpha.row(u).iter().sum();
            assert!((row_sum - 1.0).abs() < 1e-12);
            for v in 0..26 {
                let allowed = u == v || g.weight(u, v).is_some();
                assert!(alpha[(u, v)] >= 0.0);
                if !allowed {
                    assert_eq!(alpha[(u, v)], 0.0);
                }
            }
        }
    }
}

#[test]
fn isolated_node_attends_to_itself() {
    let pts = vec![
        Point2D::new(0.0, 0.0),
        Point2D::new(10.0, 0.0),
        Point2D::new(0.0, 10.0),
    ];
    let g = FaceGraph::from_edges(pts, [(0, 1)], 0).unwrap();
    let input = GraphInput::new(&g, Normalization::default()).unwrap();
    let layer = layer_for(1, 2, 3, true);
    let alpha = attention_coefficients(input.features(), &layer, &input, act()).unwrap();
    assert_eq!(alpha[(2, 2)], 1.0);
}

#[test]
fn symmetric_neighbourhood_splits_evenly() {
    // the receiver and both neighbours carry identical features and both
    // edges have the same length, so every logit ties
    let pts = vec![
        Point2D::new(0.0, 0.0),
        Point2D::new(10.0, 0.0),
        Point2D::new(-10.0, 0.0),
    ];
    let g = FaceGraph::from_edges(pts, [(0, 1), (0, 2)], 0).unwrap();
    let input = GraphInput::new(&g, Normalization::default()).unwrap();
    let layer = layer_for(2, 2, 3, false);
    let h = Matrix::from_fn(3, 2, |_, j| 0.3 + j as f64);
    let alpha = attention_coefficients(&h, &layer, &input, act()).unwrap();
    for v in 0..3 {
        assert!((alpha[(0, v)] - 1.0 / 3.0).abs() < 1e-15);
    }
}

#[test]
fn gat_forward_matches_scalar_oracle_and_range() {
    for seed in 0..10 {
        let g = random_small_graph(seed, 6);
        let input = GraphInput::new(&g, Normalization::default()).unwrap();
        let layer = layer_for(seed + 7, 2, 5, true);
        let h = random_features(seed, 6, 2);
        let out = gat_forward(&h, &layer, &input, act()).unwrap();
        let alpha = scalar_attention(&h, &layer, &g);
        let w = &layer.weight.value;
        for u in 0..6 {
            for i in 0..5 {
                let mut m = 0.0;
                for v in 0..6 {
                    let zv: f64 = (0..2).map(|j| w[(i, j)] * h[(v, j)]).sum();
                    m += alpha[(u, v)] * zv;
                }
                assert!((out[(u, i)] - sigmoid(m)).abs() < 1e-12);
                assert!(out[(u, i)] > 0.0 && out[(u, i)] < 1.0);
            }
        }
    }
}

#[test]
fn one_hot_attention_reduces_to_sigmoid_projection() {
    // a single closed neighbourhood {u}: the output is σ(W h_u)
    let pts = vec![Point2D::new(5.0, 5.0), Point2D::new(50.0, 5.0)];
    let g = FaceGraph::from_edges(pts, std::iter::empty(), 0).unwrap();
    let input = GraphInput::new(&g, Normalization::default()).unwrap();
    let layer = layer_for(3, 2, 4, true);
    let h = random_features(9, 2, 2);
    let out = gat_forward(&h, &layer, &input, act()).unwrap();
    let z = layer.weight.value.matvec(h.row(1)).unwrap();
    for i in 0..4 {
        assert!((out[(1, i)] - sigmoid(z[i])).abs() < 1e-15);
    }
}

#[test]
fn dimension_errors() {
    let g = random_small_graph(0, 5);
    let input = GraphInput::new(&g, Normalization::default()).unwrap();
    let layer = layer_for(0, 3, 4, true);
    assert!(matches!(
        gat_forward(&random_features(0, 5, 2), &layer, &input, act()),
        Err(Error::Dimension(_))
    ));
    assert!(gat_forward(&random_features(0, 4, 3), &layer, &input, act()).is_err());
}

#[test]
fn mean_pool_properties() {
    let row = [0.25, -1.0, 3.5];
    let h = Matrix::from_fn(26, 3, |_, j| row[j]);
    assert_eq!(mean_pool_nodes(&h).unwrap(), row.to_vec());

    let h = random_features(4, 26, 5);
    let mut naive = [0.0; 5];
    for u in 0..26 {
        for j in 0..5 {
            naive[j] += h[(u, j)];
        }
    }
    let pooled = mean_pool_nodes(&h).unwrap();
    for j in 0..5 {
        assert!((pooled[j] - naive[j] / 26.0).abs() < 1e-15);
    }
    let reversed = Matrix::from_fn(26, 5, |u, j| h[(25 - u, j)]);
    for (a, b) in mean_pool_nodes(&reversed).unwrap().iter().zip(&pooled) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!(mean_pool_nodes(&Matrix::zeros(0, 3)).is_err());
}

fn loss_and_grads(model: &FpgModel, g: &FaceGraph, label: usize) -> (f64, Vec<Matrix>) {
    let (logits, cache) = model_forward(g, model).unwrap();
    let (loss, dlogits) = cross_entropy(logits, label);
    (loss, model_backward(model, &cache, dlogits).unwrap().0)
}

fn numeric_grads(model: &FpgModel, g: &FaceGraph, label: usize) -> Vec<Matrix> {
    let mut params: Vec<ParamTensor> = model.params().into_iter().cloned().collect();
    let mut scratch = model.clone();
    finite_diff_grad(
        |ps| {
            scratch.load_params(ps).unwrap();
            cross_entropy(model_forward(g, &scratch).unwrap().0, label).0
        },
        &mut params,
        DEFAULT_STEP,
    )
}

#[test]
fn full_model_gradients_match_finite_differences() {
    for seed in 0..4 {
        for edge in [true, false] {
            let cfg = ModelConfig {
                edge_weight_in_attention: edge,
                ..ModelConfig::default()
            };
            let model = FpgModel::new(cfg, seed).unwrap();
            let g = random_face_graph(seed + 50);
            let label = (seed % 2) as usize;
            let (_, analytic) = loss_and_grads(&model, &g, label);
            let numeric = numeric_grads(&model, &g, label);
            let err = relative_error(&analytic, &numeric);
            assert!(err < 1e-4, "seed {seed} edge {edge}: relative error {err}");
        }
    }
}

#[test]
fn backward_is_linear_in_upstream_gradient() {
    let model = FpgModel::new(ModelConfig::default(), 11).unwrap();
    let g = random_face_graph(12);
    let (_, cache) = model_forward(&g, &model).unwrap();
    let zero = model_backward(&model, &cache, [0.0, 0.0]).unwrap();
    assert!(zero.0.iter().all(|m| m.max_abs() == 0.0));

    let single = model_backward(&model, &cache, [0.3, -0.7]).unwrap();
    let double = model_backward(&model, &cache, [0.6, -1.4]).unwrap();
    for (a, b) in single.0.iter().zip(&double.0) {
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((2.0 * x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
    }
}

#[test]
fn stale_cache_is_rejected() {
    let mut model = FpgModel::new(ModelConfig::default(), 1).unwrap();
    let g = random_face_graph(2);
    let (_, cache) = model_forward(&g, &model).unwrap();
    model.params_mut()[0].value[(0, 0)] += 1.0;
    assert!(matches!(
        model_backward(&model, &cache, [1.0, 0.0]),
        Err(Error::StaleCache)
    ));
}

#[test]
fn logits_are_invariant_under_node_relabelling() {
    for seed in 0..10 {
        let model = FpgModel::new(ModelConfig::default(), seed).unwrap();
        let g = random_face_graph(seed + 1000);
        let perm = random_permutation(&mut rng(seed), 26);
        let pg = permute_graph(&g, &perm);
        let (a, _) = model_forward(&g, &model).unwrap();
        let (b, _) = model_forward(&pg, &model).unwrap();
        assert_eq!(a.len(), 2);
        assert!((a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9);
    }
}

/// Hop distances from `src` in the closed-neighbourhood graph.
fn hops(g: &FaceGraph, src: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.num_nodes()];
    dist[src] = 0;
    let mut frontier = vec![src];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for u in frontier {
            for &(v, _) in g.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = d;
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    dist
}

#[test]
fn message_passing_is_local() {
    // path graph 0 - 1 - 2 - ... - 7
    let pts: Vec<_> = (0..8)
        .map(|i| Point2D::new(20.0 * i as f64, 3.0 * (i % 2) as f64))
        .collect();
    let g = FaceGraph::from_edges(pts, (0..7).map(|i| (i, i + 1)), 0).unwrap();
    let input = GraphInput::new(&g, Normalization::default()).unwrap();
    let model = FpgModel::new(ModelConfig::default(), 5).unwrap();
    let dist = hops(&g, 0);
    for k in 1..=4 {
        let far: Vec<usize> = (0..8).filter(|&v| dist[v] > k).collect();
        let mut zeroed = input.features().clone();
        for &v in &far {
            zeroed.row_mut(v).fill(0.0);
        }
        let run = |mut h: Matrix| {
            for layer in &model.gat_layers()[..k] {
                h = gat_forward(&h, layer, &input, act()).unwrap();
            }
            h
        };
        let (a, b) = (run(input.features().clone()), run(zeroed));
        assert_eq!(a.row(0), b.row(0), "k = {k}");
        // the node just past the horizon does change
        assert_ne!(a.row(k + 1), b.row(k + 1));
    }
}

#[test]
fn gradient_suite_is_reproducible_and_accurate() {
    let a = fpg_core::model::gradient_suite(7, 4, DEFAULT_STEP).unwrap();
    let b = fpg_core::model::gradient_suite(7, 4, DEFAULT_STEP).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().any(|r| r.edge_weight_in_attention));
    assert!(a.iter().any(|r| !r.edge_weight_in_attention));
    for r in &a {
        assert!(r.relative_error < 1e-4, "{r:?}");
    }
}
