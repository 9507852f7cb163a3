//! Reconfiguration of graph homomorphisms: embeddings and validators for the
//! host graphs, a brute-force Hom-graph oracle, pattern gadgets, the
//! reduction from K4-recolouring, and double-cover transforms.

pub mod error;
pub mod gadget;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod reduction;
pub mod surface;
pub mod transforms;

pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, Vertex};
