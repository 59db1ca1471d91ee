#![allow(dead_code)]

pub mod oracles;

use fpg_core::geometry::{build_face_graph, FaceGraph, Point2D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, extent: f64) -> Vec<Point2D> {
    (0..n)
        .map(|_| Point2D::new(rng.gen_range(0.0..extent), rng.gen_range(0.0..extent)))
        .collect()
}

/// 26 random points in the 200 px crop with a random hub.
pub fn random_face_graph(seed: u64) -> FaceGraph {
    let mut r = rng(seed);
    let pts = random_points(&mut r, 26, 200.0);
    let hub = r.gen_range(0..26);
    build_face_graph(&pts, hub).unwrap()
}

/// Small random connected graph with explicit edges.
pub fn random_small_graph(seed: u64, n: usize) -> FaceGraph {
    let mut r = rng(seed);
    let pts = random_points(&mut r, n, 200.0);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (r.gen_range(0..v), v)).collect();
    for _ in 0..n {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v {
            edges.push((u, v));
        }
    }
    FaceGraph::from_edges(pts, edges, 0).unwrap()
}

/// Relabel nodes with `perm[i]` = new index of node `i`.
pub fn permute_graph(g: &FaceGraph, perm: &[usize]) -> FaceGraph {
    let mut coords = vec![Point2D::new(0.0, 0.0); g.num_nodes()];
    for (i, p) in g.coords().iter().enumerate() {
        coords[perm[i]] = *p;
    }
    let edges: Vec<_> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
    FaceGraph::from_edges(coords, edges, perm[g.hub()]).unwrap()
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
