//! Benchmark fixtures.

use fpg_core::geometry::{build_face_graph, FaceGraph, Point2D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` uniform points in the 200 px crop.
pub fn random_points(seed: u64, n: usize) -> Vec<Point2D> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point2D::new(r.gen_range(0.0..200.0), r.gen_range(0.0..200.0)))
        .collect()
}

pub fn face_graph(seed: u64) -> FaceGraph {
    build_face_graph(&random_points(seed, 26), 13).expect("random points in general position")
}
