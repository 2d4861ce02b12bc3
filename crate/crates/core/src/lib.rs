//! Edge-Erdős–Pósa workbench: graph model, block and segment
//! decompositions, minor-model search, gadget constructions and
//! brute-force packing/covering verifiers.

mod bits;
pub mod decomposition;
pub mod error;
pub mod format;
pub mod gadgets;
pub mod graph;
pub mod minor;
pub mod verify;

pub use bits::{MAX_EDGES, MAX_VERTICES};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeSet, Graph, GraphBuilder, Origin, UnionMap, VertexLabel};
