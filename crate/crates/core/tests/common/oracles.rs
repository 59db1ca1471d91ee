//! Brute-force references shared by the integration and acceptance tests.
#![allow(dead_code)]

use fpg_core::geometry::{Point2D, Triangle};

/// Number of convex-hull vertices (collinear boundary points dropped).
pub fn hull_size(points: &[Point2D]) -> usize {
    convex_hull(points).len()
}

/// Counter-clockwise hull by the monotone chain.
pub fn convex_hull(points: &[Point2D]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p.x, p.y)).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

pub fn polygon_area(poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        / 2.0
}

/// Circumcentre and radius from the perpendicular-bisector formula.
pub fn circumcircle(a: Point2D, b: Point2D, c: Point2D) -> (Point2D, f64) {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    let sq = |p: Point2D| p.x * p.x + p.y * p.y;
    let ux = (sq(a) * (b.y - c.y) + sq(b) * (c.y - a.y) + sq(c) * (a.y - b.y)) / d;
    let uy = (sq(a) * (c.x - b.x) + sq(b) * (a.x - c.x) + sq(c) * (b.x - a.x)) / d;
    let centre = Point2D::new(ux, uy);
    (centre, centre.distance(&a))
}

/// Indices of points strictly inside a triangle's circumcircle, with a small
/// relative margin so that rounding on near-cocircular sets is not reported.
pub fn circumcircle_violations(t: &Triangle, points: &[Point2D]) -> Vec<usize> {
    let (c, r) = circumcircle(points[t.a], points[t.b], points[t.c]);
    (0..points.len())
        .filter(|&i| i != t.a && i != t.b && i != t.c)
        .filter(|&i| points[i].distance(&c) < r * (1.0 - 1e-9))
        .collect()
}
