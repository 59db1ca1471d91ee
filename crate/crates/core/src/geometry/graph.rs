use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::delaunay::delaunay_triangulate;
use super::Point2D;
use crate::error::{Error, Result};

/// Weighted undirected graph over the selected landmarks: Delaunay edges
/// plus a spoke from the hub to every other node.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceGraph {
    coords: Vec<Point2D>,
    hub: usize,
    /// Edge → Euclidean length, keyed by `(min, max)`.
    weights: BTreeMap<(usize, usize), f64>,
    /// Sorted neighbour lists with edge weights.
    adjacency: Vec<Vec<(usize, f64)>>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl FaceGraph {
    /// Graph with an explicit edge list. Weights are recomputed from the
    /// coordinates; duplicate edges are merged.
    pub fn from_edges(
        coords: Vec<Point2D>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        hub: usize,
    ) -> Result<Self> {
        let n = coords.len();
        if hub >= n {
            return Err(Error::Dimension(format!(
                "hub {hub} outside a graph of {n} nodes"
            )));
        }
        let mut weights = BTreeMap::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Dimension(format!(
                    "edge ({u}, {v}) outside {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::Dimension(format!("self edge at node {u}")));
            }
            weights.insert(key(u, v), coords[u].distance(&coords[v]));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (&(u, v), &w) in &weights {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        adjacency
            .iter_mut()
            .for_each(|a| a.sort_by_key(|&(v, _)| v));
        Ok(FaceGraph {
            coords,
            hub,
            weights,
            adjacency,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Point2D] {
        &self.coords
    }

    pub fn hub(&self) -> usize {
        self.hub
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.weights.keys().copied()
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges().collect()
    }

    pub fn num_edges(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.weights.get(&key(u, v)).copied()
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_nodes();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            nodes: self
                .coords
                .iter()
                .enumerate()
                .map(|(id, p)| NodeJson { id, x: p.x, y: p.y })
                .collect(),
            edges: self
                .weights
                .iter()
                .map(|(&(u, v), &weight)| EdgeJson { u, v, weight })
                .collect(),
            hub: self.hub,
        }
    }
}

/// Inspection format: `{nodes:[{id,x,y}], edges:[{u,v,weight}], hub}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
    pub hub: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Triangulate the selected points and connect the hub to every other node.
pub fn build_face_graph(points: &[Point2D], hub_position: usize) -> Result<FaceGraph> {
    if hub_position >= points.len() {
        return Err(Error::MalformedSubset(format!(
            "hub position {hub_position} outside {} points",
            points.len()
        )));
    }
    let triangles = delaunay_triangulate(points)?;
    let tri_edges = triangles.iter().flat_map(|t| t.edges());
    let spokes = (0..points.len())
        .filter(|&v| v != hub_position)
        .map(|v| (hub_position, v));
    FaceGraph::from_edges(points.to_vec(), tri_edges.chain(spokes), hub_position)
}
