//! Graph structures for the delegated-computation protocols.
//!
//! The central object is the dotted-complete graph: a complete graph in
//! which every edge has been subdivided by a new ("added") vertex. A
//! hidden, seeded partition assigns every vertex one of the protocol roles
//! (computation, two trap colours, dummy), carving the computation graph
//! and isolated traps out of the universal resource.

mod graph;
mod line;
mod partition;
mod state_build;

pub use graph::{dotted_complete, protocol_qubit_count, GraphError, Origin, ProtocolGraph, Role};
pub use line::{line_graph, line_graph_with_trap};
pub use partition::{hidden_partition, padded_size, Partition, TargetComputation};
pub use state_build::build_graph_state;

pub type VertexId = usize;
