//! Incremental Bowyer–Watson triangulation.
//!
//! The hull is closed with "ghost" triangles that share a single vertex at
//! infinity, so no super-triangle is ever inserted and nothing has to be
//! cleaned up afterwards. Points are inserted in input order; among
//! cocircular configurations the first inserted point wins.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::Point2D;
use crate::error::{Error, Result};

/// Points closer than this are rejected as duplicates.
pub const DUPLICATE_EPS: f64 = 1e-9;
/// Determinants within this distance of zero are treated as zero.
pub const PREDICATE_EPS: f64 = 1e-12;

const INF: usize = usize::MAX;

/// A triangle as three node indices, stored sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangle {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl Triangle {
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self> {
        if a == b || b == c || a == c {
            return Err(Error::DegenerateTriangle(a, b, c));
        }
        let mut v = [a, b, c];
        v.sort_unstable();
        Ok(Triangle {
            a: v[0],
            b: v[1],
            c: v[2],
        })
    }

    pub fn vertices(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }

    pub fn edges(&self) -> [(usize, usize); 3] {
        [(self.a, self.b), (self.b, self.c), (self.a, self.c)]
    }
}

/// Twice the signed area of `abc`; positive when counter-clockwise.
#[inline]
pub fn orient(a: Point2D, b: Point2D, c: Point2D) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Incircle determinant; positive when `p` is inside the circumcircle of the
/// counter-clockwise triangle `abc`.
#[inline]
fn incircle(a: Point2D, b: Point2D, c: Point2D, p: Point2D) -> f64 {
    let (adx, ady) = (a.x - p.x, a.y - p.y);
    let (bdx, bdy) = (b.x - p.x, b.y - p.y);
    let (cdx, cdy) = (c.x - p.x, c.y - p.y);
    let ad = adx * adx + ady * ady;
    let bd = bdx * bdx + bdy * bdy;
    let cd = cdx * cdx + cdy * cdy;
    adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx)
}

/// True iff `p` lies strictly inside the circumcircle of `t`.
pub fn circumcircle_contains(t: &Triangle, p: Point2D, coords: &[Point2D]) -> Result<bool> {
    let get = |i: usize| {
        coords
            .get(i)
            .copied()
            .ok_or_else(|| Error::Dimension(format!("triangle vertex {i} out of range")))
    };
    let (a, b, c) = (get(t.a)?, get(t.b)?, get(t.c)?);
    let o = orient(a, b, c);
    if o.abs() <= PREDICATE_EPS {
        return Err(Error::DegenerateTriangle(t.a, t.b, t.c));
    }
    let det = incircle(a, b, c, p) * o.signum();
    Ok(det > PREDICATE_EPS)
}

struct Builder<'a> {
    pts: &'a [Point2D],
    /// Counter-clockwise triangles; a ghost keeps `INF` in the last slot and
    /// its first edge is a hull edge with the exterior on its left.
    tris: Vec<[usize; 3]>,
}

impl Builder<'_> {
    fn in_circumdisk(&self, t: &[usize; 3], p: Point2D) -> bool {
        if t[2] == INF {
            let (a, b) = (self.pts[t[0]], self.pts[t[1]]);
            let o = orient(a, b, p);
            if o > PREDICATE_EPS {
                return true;
            }
            if o < -PREDICATE_EPS {
                return false;
            }
            // on the hull line: only the open segment belongs to this ghost
            let t_along = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
            let len2 = (b.x - a.x).powi(2) + (b.y - a.y).powi(2);
            t_along > 0.0 && t_along < len2
        } else {
            let [a, b, c] = t.map(|i| self.pts[i]);
            incircle(a, b, c, p) > PREDICATE_EPS
        }
    }

    /// Triangle that geometrically holds `p` (real triangles first).
    fn locate(&self, p: Point2D) -> Option<usize> {
        self.tris
            .iter()
            .position(|t| {
                t[2] != INF && {
                    let [a, b, c] = t.map(|i| self.pts[i]);
                    orient(a, b, p) >= -PREDICATE_EPS
                        && orient(b, c, p) >= -PREDICATE_EPS
                        && orient(c, a, p) >= -PREDICATE_EPS
                }
            })
            .or_else(|| {
                self.tris.iter().position(|t| {
                    t[2] == INF && orient(self.pts[t[0]], self.pts[t[1]], p) > PREDICATE_EPS
                })
            })
    }

    fn insert(&mut self, pi: usize) -> Result<()> {
        let p = self.pts[pi];
        let seed = self
            .locate(p)
            .ok_or_else(|| Error::DegenerateConfiguration(format!("cannot locate point {pi}")))?;

        // directed edge -> owning triangle, sorted for binary search
        let mut edge_owner: Vec<((usize, usize), usize)> = Vec::with_capacity(3 * self.tris.len());
        for (ti, t) in self.tris.iter().enumerate() {
            for k in 0..3 {
                edge_owner.push(((t[k], t[(k + 1) % 3]), ti));
            }
        }
        edge_owner.sort_unstable();
        let owner = |e: (usize, usize)| {
            edge_owner
                .binary_search_by_key(&e, |&(k, _)| k)
                .ok()
                .map(|i| edge_owner[i].1)
        };

        let mut cavity = vec![false; self.tris.len()];
        cavity[seed] = true;
        let mut queue = VecDeque::from([seed]);
        while let Some(ti) = queue.pop_front() {
            let t = self.tris[ti];
            for k in 0..3 {
                if let Some(nb) = owner((t[(k + 1) % 3], t[k])) {
                    if !cavity[nb] && self.in_circumdisk(&self.tris[nb], p) {
                        cavity[nb] = true;
                        queue.push_back(nb);
                    }
                }
            }
        }

        let boundary = loop {
            let mut boundary = Vec::new();
            let mut offender = None;
            for ti in (0..self.tris.len()).filter(|&ti| cavity[ti]) {
                let t = self.tris[ti];
                for k in 0..3 {
                    let (x, y) = (t[k], t[(k + 1) % 3]);
                    if owner((y, x)).is_some_and(|nb| cavity[nb]) {
                        continue;
                    }
                    if x != INF
                        && y != INF
                        && orient(self.pts[x], self.pts[y], p) <= PREDICATE_EPS
                        && ti != seed
                    {
                        offender.get_or_insert(ti);
                    }
                    boundary.push((x, y));
                }
            }
            match offender {
                Some(ti) => cavity[ti] = false,
                None => break boundary,
            }
        };

        let mut next: Vec<[usize; 3]> = self
            .tris
            .iter()
            .enumerate()
            .filter(|(i, _)| !cavity[*i])
            .map(|(_, t)| *t)
            .collect();
        for (x, y) in boundary {
            let tri = if y == INF {
                [pi, x, INF]
            } else if x == INF {
                [y, pi, INF]
            } else {
                [x, y, pi]
            };
            next.push(tri);
        }
        self.tris = next;
        Ok(())
    }
}

fn validate_points(points: &[Point2D]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::DegenerateConfiguration(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(Error::InvalidCoordinate(format!("point {i} is not finite")));
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].distance(&points[j]) < DUPLICATE_EPS {
                return Err(Error::DuplicatePoint(i, j));
            }
        }
    }
    Ok(())
}

/// Delaunay triangulation of `points`. Triangles are returned in canonical
/// (sorted) form, ordered lexicographically.
pub fn delaunay_triangulate(points: &[Point2D]) -> Result<Vec<Triangle>> {
    validate_points(points)?;
    let (p0, p1) = (points[0], points[1]);
    let third = (2..points.len())
        .find(|&k| orient(p0, p1, points[k]).abs() > PREDICATE_EPS)
        .ok_or_else(|| Error::DegenerateConfiguration("all points are collinear".into()))?;

    let (a, b, c) = if orient(p0, p1, points[third]) > 0.0 {
        (0, 1, third)
    } else {
        (1, 0, third)
    };
    let mut builder = Builder {
        pts: points,
        tris: vec![[a, b, c], [b, a, INF], [c, b, INF], [a, c, INF]],
    };
    for pi in (2..points.len()).filter(|&k| k != third) {
        builder.insert(pi)?;
    }

    let mut out: Vec<Triangle> = builder
        .tris
        .iter()
        .filter(|t| t[2] != INF)
        .map(|t| Triangle::new(t[0], t[1], t[2]))
        .collect::<Result<_>>()?;
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2D {
        Point2D::new(x, y)
    }

    #[test]
    fn circumcircle_examples() {
        let coords = [p(0.0, 0.0), p(2.0, 0.0), p(0.0, 2.0)];
        let t = Triangle::new(0, 1, 2).unwrap();
        // circumcentre (1, 1), radius √2
        let c = p(1.0, 1.0);
        let r = 2f64.sqrt();
        assert!(p(0.5, 0.5).distance(&c) < r);
        assert!(circumcircle_contains(&t, p(0.5, 0.5), &coords).unwrap());
        assert!(!circumcircle_contains(&t, p(10.0, 10.0), &coords).unwrap());
        assert_eq!(p(2.0, 2.0).distance(&c), r);
        assert!(!circumcircle_contains(&t, p(2.0, 2.0), &coords).unwrap());
    }

    #[test]
    fn circumcircle_is_orientation_independent() {
        // clockwise vertex order gives the same answer
        let coords = [p(0.0, 0.0), p(0.0, 2.0), p(2.0, 0.0)];
        let t = Triangle::new(0, 1, 2).unwrap();
        assert!(circumcircle_contains(&t, p(0.5, 0.5), &coords).unwrap());
        assert!(!circumcircle_contains(&t, p(-3.0, 0.5), &coords).unwrap());
    }

    #[test]
    fn collinear_triangle_is_degenerate() {
        let coords = [p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0)];
        let t = Triangle::new(0, 1, 2).unwrap();
        assert!(matches!(
            circumcircle_contains(&t, p(0.0, 1.0), &coords),
            Err(Error::DegenerateTriangle(..))
        ));
    }

    #[test]
    fn minimal_simplex() {
        let tris = delaunay_triangulate(&[p(0.0, 0.0), p(1.0, 0.0), p(0.3, 2.0)]).unwrap();
        assert_eq!(tris, vec![Triangle::new(0, 1, 2).unwrap()]);
    }

    #[test]
    fn interior_point_splits_triangle() {
        let pts = [p(0.0, 0.0), p(4.0, 0.0), p(2.0, 3.0), p(2.0, 1.0)];
        let tris = delaunay_triangulate(&pts).unwrap();
        assert_eq!(tris.len(), 3);
        for t in &tris {
            for (i, &q) in pts.iter().enumerate() {
                if !t.vertices().contains(&i) {
                    assert!(!circumcircle_contains(t, q, &pts).unwrap());
                }
            }
        }
    }

    #[test]
    fn square_with_collinear_start() {
        // first three points are collinear; cocircular square corners
        let pts = [
            p(0.0, 0.0),
            p(1.0, 0.0),
            p(2.0, 0.0),
            p(2.0, 2.0),
            p(0.0, 2.0),
        ];
        let tris = delaunay_triangulate(&pts).unwrap();
        // 5 points all on the hull: T = 2·5 − 2 − 5 = 3
        assert_eq!(tris.len(), 3);
    }

    #[test]
    fn duplicate_and_collinear_inputs() {
        let dup = [p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(1.0, 1e-12)];
        assert!(matches!(
            delaunay_triangulate(&dup),
            Err(Error::DuplicatePoint(1, 3))
        ));
        let line: Vec<_> = (0..6).map(|i| p(i as f64, 2.0 * i as f64)).collect();
        assert!(matches!(
            delaunay_triangulate(&line),
            Err(Error::DegenerateConfiguration(_))
        ));
        assert!(delaunay_triangulate(&[p(0.0, 0.0), p(1.0, 0.0)]).is_err());
    }

    #[test]
    fn point_on_hull_edge_and_outside() {
        let pts = [
            p(0.0, 0.0),
            p(4.0, 0.0),
            p(0.0, 4.0),
            p(2.0, 0.0), // on the hull edge
            p(5.0, 5.0), // outside the current hull
            p(-1.0, 2.0),
        ];
        let tris = delaunay_triangulate(&pts).unwrap();
        // hull: (0,0),(2,0),(4,0),(5,5),(0,4),(-1,2) -> 6 boundary vertices
        assert_eq!(tris.len(), 2 * 6 - 2 - 6);
        for t in &tris {
            for (i, &q) in pts.iter().enumerate() {
                if !t.vertices().contains(&i) {
                    assert!(
                        !circumcircle_contains(t, q, &pts).unwrap(),
                        "{t:?} holds {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let pts: Vec<_> = (0..26)
            .map(|i| {
                let f = i as f64;
                p((f * 37.0) % 200.0, (f * f * 11.0) % 197.0)
            })
            .collect();
        assert_eq!(
            delaunay_triangulate(&pts).unwrap(),
            delaunay_triangulate(&pts).unwrap()
        );
    }
}
