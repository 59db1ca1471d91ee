use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::FaceGraph;
use crate::numerics::Matrix;

/// Scale factors applied to a graph before it enters the network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// Subtracted from both coordinates before scaling.
    pub coord_offset: f64,
    /// Coordinates are divided by this (the 200 px face crop).
    pub coord_scale: f64,
    /// Edge lengths are divided by this (the crop diagonal).
    pub edge_scale: f64,
}

impl Default for Normalization {
    fn default() -> Self {
        Normalization {
            coord_offset: 0.0,
            coord_scale: 200.0,
            edge_scale: 200.0 * std::f64::consts::SQRT_2,
        }
    }
}

/// Closed neighbourhoods in compressed row form, sorted by node index.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Adjacency {
    pub offsets: Vec<usize>,
    pub entries: Vec<(usize, f64)>,
}

impl Adjacency {
    pub fn row(&self, u: usize) -> &[(usize, f64)] {
        &self.entries[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// A graph prepared for the network: normalised layer-0 features and closed
/// neighbourhoods `N(u) ∪ {u}` (self-loops carry edge weight 0).
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInput {
    features: Matrix,
    adjacency: Arc<Adjacency>,
}

impl GraphInput {
    pub fn new(graph: &FaceGraph, norm: Normalization) -> Result<Self> {
        let coords = graph.coords();
        let mut data = Vec::with_capacity(coords.len() * 2);
        for p in coords {
            data.push((p.x - norm.coord_offset) / norm.coord_scale);
            data.push((p.y - norm.coord_offset) / norm.coord_scale);
        }
        let features = Matrix::from_vec(coords.len(), 2, data)?;
        let mut offsets = vec![0];
        let mut entries = Vec::new();
        for u in 0..graph.num_nodes() {
            let start = entries.len();
            entries.extend(
                graph
                    .neighbors(u)
                    .iter()
                    .map(|&(v, w)| (v, w / norm.edge_scale)),
            );
            entries.push((u, 0.0));
            entries[start..].sort_by_key(|&(v, _)| v);
            offsets.push(entries.len());
        }
        Ok(GraphInput {
            features,
            adjacency: Arc::new(Adjacency { offsets, entries }),
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.num_nodes()
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    /// Closed neighbourhood of `u` with normalised edge weights, sorted by
    /// node index.
    pub fn neighborhood(&self, u: usize) -> &[(usize, f64)] {
        self.adjacency.row(u)
    }

    pub(crate) fn adjacency(&self) -> &Arc<Adjacency> {
        &self.adjacency
    }
}
