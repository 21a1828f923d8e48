//! Single-trap line graphs: the small substrate used for soundness
//! experiments in place of the full brickwork family.

use crate::graph::{GraphError, Origin, ProtocolGraph, Role};
use rand::Rng;

/// A path graph on `n` vertices with one uniformly placed trap whose path
/// neighbours are dummies; every remaining vertex is a computation qubit.
/// The trap is therefore disentangled from the computation wires.
pub fn line_graph(n: usize, rng: &mut impl Rng) -> Result<ProtocolGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::TooSmall(n));
    }
    line_graph_with_trap(n, rng.random_range(0..n))
}

/// [`line_graph`] with the trap position fixed; exact-enumeration oracles
/// iterate this over every position.
pub fn line_graph_with_trap(n: usize, trap: usize) -> Result<ProtocolGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::TooSmall(n));
    }
    if trap >= n {
        return Err(GraphError::VertexOutOfRange(trap));
    }
    let origins = vec![Origin::Primary; n];
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    let order: Vec<usize> = (0..n).collect();
    let mut g = ProtocolGraph::new(origins, edges, order)?;

    for v in 0..n {
        g.set_role(v, Role::Computation);
    }
    g.set_role(trap, Role::Trap1);
    if trap > 0 {
        g.set_role(trap - 1, Role::Dummy);
    }
    if trap + 1 < n {
        g.set_role(trap + 1, Role::Dummy);
    }
    Ok(g)
}
