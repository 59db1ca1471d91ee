use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of points in the 68-point landmark layout.
pub const NUM_LANDMARKS: usize = 68;
/// Number of nodes in a facial point graph.
pub const NUM_GRAPH_NODES: usize = 26;
/// 0-based index of the nose tip in the 68-point layout.
pub const NOSE_TIP: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2D { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Point2D {
        Point2D::new(self.x + dx, self.y + dy)
    }
}

/// The 68 landmark coordinates of one video frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkFrame {
    points: Vec<Point2D>,
    frame_index: u32,
}

impl LandmarkFrame {
    pub fn new(points: Vec<Point2D>, frame_index: u32) -> Result<Self> {
        if points.len() != NUM_LANDMARKS {
            return Err(Error::Dimension(format!(
                "a landmark frame has {NUM_LANDMARKS} points, got {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidCoordinate(format!(
                "landmark {i} is not finite"
            )));
        }
        Ok(LandmarkFrame {
            points,
            frame_index,
        })
    }

    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    pub fn frame_index(&self) -> u32 {
        self.frame_index
    }
}

/// Which 26 landmarks form the graph, and which of them is the hub.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LandmarkSubset {
    indices: Vec<usize>,
    hub_position: usize,
}

impl Default for LandmarkSubset {
    /// Outer and inner lip contour (48..=67), five jaw points symmetric about
    /// the chin, and the nose tip as the hub.
    fn default() -> Self {
        let mut indices: Vec<usize> = (48..=67).collect();
        indices.extend([3, 5, 8, 11, 13]);
        indices.push(NOSE_TIP);
        LandmarkSubset {
            indices,
            hub_position: NUM_GRAPH_NODES - 1,
        }
    }
}

impl LandmarkSubset {
    pub fn new(indices: Vec<usize>, hub_position: usize) -> Result<Self> {
        if indices.len() != NUM_GRAPH_NODES {
            return Err(Error::MalformedSubset(format!(
                "expected {NUM_GRAPH_NODES} indices, got {}",
                indices.len()
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= NUM_LANDMARKS) {
            return Err(Error::MalformedSubset(format!(
                "landmark index {bad} outside [0, {}]",
                NUM_LANDMARKS - 1
            )));
        }
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedSubset(format!(
                "landmark {} listed twice",
                w[0]
            )));
        }
        if hub_position >= NUM_GRAPH_NODES {
            return Err(Error::MalformedSubset(format!(
                "hub position {hub_position} outside [0, {}]",
                NUM_GRAPH_NODES - 1
            )));
        }
        Ok(LandmarkSubset {
            indices,
            hub_position,
        })
    }

    /// Build a subset whose hub is identified by its landmark index rather
    /// than its position in the list.
    pub fn with_hub_landmark(indices: Vec<usize>, hub_landmark: usize) -> Result<Self> {
        let pos = indices
            .iter()
            .position(|&i| i == hub_landmark)
            .ok_or_else(|| {
                Error::MalformedSubset(format!("hub landmark {hub_landmark} is not in the subset"))
            })?;
        LandmarkSubset::new(indices, pos)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn hub_position(&self) -> usize {
        self.hub_position
    }

    pub fn hub_landmark(&self) -> usize {
        self.indices[self.hub_position]
    }
}

pub fn select_landmarks(frame: &LandmarkFrame, subset: &LandmarkSubset) -> Result<Vec<Point2D>> {
    subset
        .indices()
        .iter()
        .map(|&i| {
            frame.points().get(i).copied().ok_or_else(|| {
                Error::MalformedSubset(format!("landmark index {i} outside the frame"))
            })
        })
        .collect()
}
