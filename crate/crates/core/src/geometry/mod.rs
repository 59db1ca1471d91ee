//! Landmark selection, Delaunay triangulation and facial point graphs.

pub mod delaunay;
mod graph;
mod landmarks;

pub use delaunay::{circumcircle_contains, delaunay_triangulate, Triangle};
pub use graph::{build_face_graph, EdgeJson, FaceGraph, GraphJson, NodeJson};
pub use landmarks::{
    select_landmarks, LandmarkFrame, LandmarkSubset, Point2D, NOSE_TIP, NUM_GRAPH_NODES,
    NUM_LANDMARKS,
};

use crate::error::Result;

/// Frame → selected points → graph.
pub fn frame_graph(frame: &LandmarkFrame, subset: &LandmarkSubset) -> Result<FaceGraph> {
    let points = select_landmarks(frame, subset)?;
    build_face_graph(&points, subset.hub_position())
}
