//! Exact tools for 2-distance coloring of sparse graphs: potential and mad
//! via minimum cuts, an exact coloring solver, reducible-configuration
//! detectors with constructive reductions, and a discharging engine.

pub mod coloring;
pub mod corpus;
pub mod discharging;
pub mod fixtures;
pub mod flow;
pub mod graph;
pub mod hunt;
pub mod io;
pub mod matching;
pub mod potential;
pub mod reductions;
pub mod verify;

pub use coloring::{Coloring, SearchOutcome};
pub use graph::{Graph, GraphError, PathDescriptor, Vertex, VertexSet, VertexSignature};
pub use num_rational::Ratio;
pub use potential::{PotentialParams, PotentialResult};
