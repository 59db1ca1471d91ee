//! Facial point graphs: per-frame landmark graphs classified with a graph
//! attention network, aggregated by majority vote under leave-one-subject-out
//! cross-validation.

pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod io;
pub mod model;
pub mod numerics;
pub mod pipeline;
pub mod seed;

pub use error::{Error, Result};
