//! Locating corrupt nodes in a network from peer reports.
//!
//! Vertices of an inspection graph report on their neighbors. Truthful
//! vertices always report correctly; corrupt ones report whatever an
//! adversary chooses. Given only the graph and the reports, the detectors
//! here label vertices as truthful or corrupt, never wrongly, as long as
//! the graph expands well and truthful vertices form a majority.

pub mod certify;
pub mod constructions;
pub mod detection;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod orient;
pub mod puzzle;
pub mod reporting;
pub mod sizes;
pub mod spectral;

pub use error::{Error, ErrorClass, Result};
pub use graph::Graph;
