//! Spatial random graphs and penalized first-passage spreading.

pub mod cli;
pub mod error;
pub mod estimate;
pub mod girg;
pub mod gowalla;
pub mod graph;
pub mod io;
pub mod rewire;
pub mod spread;
pub mod theory;

pub use error::{Error, Result};
pub use graph::{Edge, Metric, SpatialGraph};
