mod common;

use std::collections::BTreeSet;

use common::oracles::{circumcircle_violations, convex_hull, hull_size, polygon_area};
use common::{random_face_graph, random_points, rng};
use fpg_core::geometry::{
    build_face_graph, delaunay_triangulate, frame_graph, LandmarkSubset, Point2D, Triangle,
};
use fpg_core::io::{generate_synthetic, SyntheticSpec};
use proptest::prelude::*;

fn area(t: &Triangle, p: &[Point2D]) -> f64 {
    let (a, b, c) = (p[t.a], p[t.b], p[t.c]);
    ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)).abs() / 2.0
}

fn check_triangulation(points: &[Point2D]) {
    let tris = delaunay_triangulate(points).unwrap();
    for t in &tris {
        let bad = circumcircle_violations(t, points);
        assert!(bad.is_empty(), "{t:?} has {bad:?} inside its circumcircle");
        assert!(area(t, points) > 0.0);
    }
    assert_eq!(tris.len(), 2 * points.len() - 2 - hull_size(points));
    let covered: f64 = tris.iter().map(|t| area(t, points)).sum();
    let hull = polygon_area(&convex_hull(points));
    assert!(
        (covered - hull).abs() < 1e-9 * hull.max(1.0),
        "{covered} vs hull {hull}"
    );
}

#[test]
fn random_face_sized_sets() {
    let mut r = rng(2024);
    for _ in 0..200 {
        check_triangulation(&random_points(&mut r, 26, 200.0));
    }
}

#[test]
fn clustered_and_wide_sets() {
    let mut r = rng(7);
    for n in [3, 4, 5, 10, 60, 150] {
        for extent in [1.0, 200.0, 1e4] {
            check_triangulation(&random_points(&mut r, n, extent));
        }
    }
}

#[test]
fn regular_grid_is_covered_without_violations() {
    // every 4 neighbouring grid points are cocircular
    let pts: Vec<Point2D> = (0..36)
        .map(|i| Point2D::new((i % 6) as f64 * 10.0, (i / 6) as f64 * 10.0))
        .collect();
    let tris = delaunay_triangulate(&pts).unwrap();
    assert_eq!(tris.len(), 50);
    let covered: f64 = tris.iter().map(|t| area(t, &pts)).sum();
    assert!((covered - 2500.0).abs() < 1e-9);
    for t in &tris {
        assert!(circumcircle_violations(t, &pts).is_empty());
    }
}

#[test]
fn triangulation_does_not_depend_on_input_order() {
    let mut r = rng(99);
    for _ in 0..20 {
        let pts = random_points(&mut r, 26, 200.0);
        let perm = common::random_permutation(&mut r, pts.len());
        let shuffled: Vec<Point2D> = perm.iter().map(|&i| pts[i]).collect();
        let canon = |tris: Vec<Triangle>, map: &dyn Fn(usize) -> usize| -> BTreeSet<[usize; 3]> {
            tris.into_iter()
                .map(|t| {
                    let mut v = [map(t.a), map(t.b), map(t.c)];
                    v.sort_unstable();
                    v
                })
                .collect()
        };
        let a = canon(delaunay_triangulate(&pts).unwrap(), &|i| i);
        let b = canon(delaunay_triangulate(&shuffled).unwrap(), &|i| perm[i]);
        assert_eq!(a, b);
    }
}

#[test]
fn random_face_graphs_have_a_full_hub() {
    for seed in 0..100 {
        let g = random_face_graph(seed);
        assert_eq!(g.degree(g.hub()), 25);
        assert!(g.is_connected());
        for (u, v) in g.edges() {
            let d = g.coords()[u].distance(&g.coords()[v]);
            assert_eq!(g.weight(u, v), Some(d));
        }
    }
}

#[test]
fn synthetic_frames_give_valid_graphs() {
    let data = generate_synthetic(&SyntheticSpec {
        n_subjects_per_class: 2,
        reps_per_subject: 2,
        frames_per_rep: 12,
        ..SyntheticSpec::default()
    })
    .unwrap();
    let subset = LandmarkSubset::default();
    for s in data.subjects() {
        for r in s.repetitions() {
            for f in r.frames() {
                let g = frame_graph(f, &subset).unwrap();
                assert_eq!(g.num_nodes(), 26);
                assert_eq!(g.hub(), 25);
                assert_eq!(g.degree(25), 25);
                assert!(g.is_connected());
            }
        }
    }
}

proptest! {
    #[test]
    fn any_general_position_set(seed in any::<u64>(), n in 3usize..40) {
        let mut r = rng(seed);
        let pts = random_points(&mut r, n, 200.0);
        check_triangulation(&pts);
    }

    #[test]
    fn hub_spokes_cover_every_node(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pts = random_points(&mut r, 26, 200.0);
        let hub = (seed % 26) as usize;
        let g = build_face_graph(&pts, hub).unwrap();
        prop_assert_eq!(g.degree(hub), 25);
        prop_assert!(g.is_connected());
    }
}
