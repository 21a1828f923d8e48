use crate::VertexId;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("dotted-complete graph needs at least 2 primary vertices, got {0}")]
    TooSmall(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("target computation is not a union of monotone paths: {0}")]
    InvalidTarget(String),
    #[error("graph state would need {0} qubits, over the statevector cap")]
    TooManyQubits(usize),
}

/// Whether a vertex belonged to the original complete graph or was added to
/// subdivide an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Primary,
    Added,
}

/// Protocol role of a vertex under a hidden partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Computation,
    Trap1,
    Trap2,
    Dummy,
    Unassigned,
}

impl Role {
    pub fn is_trap(self) -> bool {
        matches!(self, Role::Trap1 | Role::Trap2)
    }
}

/// An undirected graph with per-vertex origin and role tags plus a fixed
/// public measurement order.
///
/// The measurement order is part of the public structure (it must not
/// depend on the hidden roles). For dotted graphs it interleaves added
/// vertices between their endpoints so that wire dependencies always point
/// backwards in the order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProtocolGraph {
    origins: Vec<Origin>,
    roles: Vec<Role>,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<VertexId>>,
    measurement_order: Vec<VertexId>,
}

impl ProtocolGraph {
    pub(crate) fn new(
        origins: Vec<Origin>,
        edges: Vec<(VertexId, VertexId)>,
        measurement_order: Vec<VertexId>,
    ) -> Result<ProtocolGraph, GraphError> {
        let n = origins.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange(a.max(b)));
            }
            if a == b {
                return Err(GraphError::Malformed(format!("self-loop at {a}")));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(GraphError::Malformed(format!("duplicate edge {key:?}")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        if measurement_order.len() != n {
            return Err(GraphError::Malformed(
                "measurement order must cover every vertex exactly once".into(),
            ));
        }
        Ok(ProtocolGraph {
            roles: vec![Role::Unassigned; n],
            origins,
            edges,
            adjacency,
            measurement_order,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.origins.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbours(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn origin(&self, v: VertexId) -> Origin {
        self.origins[v]
    }

    pub fn role(&self, v: VertexId) -> Role {
        self.roles[v]
    }

    pub fn set_role(&mut self, v: VertexId, role: Role) {
        self.roles[v] = role;
    }

    pub fn primaries(&self) -> Vec<VertexId> {
        (0..self.n_vertices())
            .filter(|&v| self.origins[v] == Origin::Primary)
            .collect()
    }

    pub fn vertices_with_role(&self, role: Role) -> Vec<VertexId> {
        (0..self.n_vertices())
            .filter(|&v| self.roles[v] == role)
            .collect()
    }

    /// The fixed public order in which qubits are measured.
    pub fn measurement_order(&self) -> &[VertexId] {
        &self.measurement_order
    }

    /// Number of `|1⟩`-valued dummy neighbours of `v`, given the dummy
    /// value assignment (indexed by vertex id, `None` for non-dummies).
    pub fn one_dummy_parity(&self, v: VertexId, dummy_values: &[Option<u8>]) -> u8 {
        let mut parity = 0;
        for &u in self.neighbours(v) {
            if let Some(val) = dummy_values[u] {
                parity ^= val & 1;
            }
        }
        parity
    }

    /// JSON export of the structure (vertices with tags, edge list).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": (0..self.n_vertices()).map(|v| serde_json::json!({
                "id": v,
                "origin": self.origins[v],
                "role": self.roles[v],
            })).collect::<Vec<_>>(),
            "edges": self.edges,
            "measurement_order": self.measurement_order,
        })
    }

    /// Import a graph previously exported with [`ProtocolGraph::to_json`].
    pub fn from_json(value: &serde_json::Value) -> Result<ProtocolGraph, GraphError> {
        let verts = value["vertices"]
            .as_array()
            .ok_or_else(|| GraphError::Malformed("missing vertices".into()))?;
        let mut origins = Vec::with_capacity(verts.len());
        let mut roles = Vec::with_capacity(verts.len());
        for v in verts {
            origins.push(
                serde_json::from_value(v["origin"].clone())
                    .map_err(|e| GraphError::Malformed(e.to_string()))?,
            );
            roles.push(
                serde_json::from_value(v["role"].clone())
                    .map_err(|e| GraphError::Malformed(e.to_string()))?,
            );
        }
        let edges: Vec<(VertexId, VertexId)> = serde_json::from_value(value["edges"].clone())
            .map_err(|e| GraphError::Malformed(e.to_string()))?;
        let order: Vec<VertexId> = serde_json::from_value(value["measurement_order"].clone())
            .map_err(|e| GraphError::Malformed(e.to_string()))?;
        let mut g = ProtocolGraph::new(origins, edges, order)?;
        for (v, role) in roles.into_iter().enumerate() {
            g.set_role(v, role);
        }
        Ok(g)
    }
}

/// The dotted-complete graph on `n` primary vertices: every edge of the
/// complete graph K_n is subdivided by an added vertex of degree 2.
///
/// Vertices `0..n` are the primaries; added vertices follow, one per
/// unordered primary pair in lexicographic order. The measurement order
/// interleaves each added vertex after its lower endpoint and before its
/// higher endpoint.
pub fn dotted_complete(n: usize) -> Result<ProtocolGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::TooSmall(n));
    }
    let mut origins = vec![Origin::Primary; n];
    let mut edges = Vec::with_capacity(n * (n - 1));
    let mut added_of = std::collections::HashMap::new();
    let mut next = n;
    for i in 0..n {
        for j in (i + 1)..n {
            origins.push(Origin::Added);
            edges.push((i, next));
            edges.push((next, j));
            added_of.insert((i, j), next);
            next += 1;
        }
    }
    let mut order = Vec::with_capacity(origins.len());
    for i in 0..n {
        order.push(i);
        for j in (i + 1)..n {
            order.push(added_of[&(i, j)]);
        }
    }
    ProtocolGraph::new(origins, edges, order)
}

/// Total qubit count of the protocol run delegating a computation of size
/// `n`: the vertex count of the dotted-complete graph on `3n` primaries,
/// `3n(3n + 1)/2`.
pub fn protocol_qubit_count(n: usize) -> usize {
    3 * n * (3 * n + 1) / 2
}

/// The added vertex subdividing primary pair `(i, j)`, if the graph is a
/// dotted-complete graph built by [`dotted_complete`].
pub fn added_between(graph: &ProtocolGraph, i: VertexId, j: VertexId) -> Option<VertexId> {
    graph
        .neighbours(i)
        .iter()
        .find(|&&a| graph.origin(a) == Origin::Added && graph.neighbours(a).contains(&j))
        .copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_complete_counts() {
        // one split edge
        let g = dotted_complete(2).unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.n_edges(), 2);

        // the 6-vertex example: 21 vertices
        let g = dotted_complete(6).unwrap();
        assert_eq!(g.n_vertices(), 21);

        let g = dotted_complete(4).unwrap();
        assert_eq!(g.n_vertices(), 10);
        assert_eq!(g.n_edges(), 12);

        assert!(dotted_complete(1).is_err());
    }

    #[test]
    fn closed_forms_hold_up_to_50() {
        for n in 2..=50 {
            let g = dotted_complete(n).unwrap();
            assert_eq!(g.n_vertices(), n + n * (n - 1) / 2);
            assert_eq!(g.n_edges(), n * (n - 1));
            for v in 0..g.n_vertices() {
                if g.origin(v) == Origin::Added {
                    assert_eq!(g.degree(v), 2, "added vertex {v} must bridge one edge");
                }
            }
        }
    }

    #[test]
    fn qubit_count_formula() {
        assert_eq!(protocol_qubit_count(1), 6);
        assert_eq!(protocol_qubit_count(2), 21);
        for n in 1..=20 {
            let g = dotted_complete(3 * n).unwrap();
            assert_eq!(g.n_vertices(), protocol_qubit_count(n));
        }
    }

    #[test]
    fn measurement_order_interleaves_added_vertices() {
        for n in 2..=8 {
            let g = dotted_complete(n).unwrap();
            let pos: std::collections::HashMap<_, _> = g
                .measurement_order()
                .iter()
                .enumerate()
                .map(|(p, &v)| (v, p))
                .collect();
            for v in 0..g.n_vertices() {
                if g.origin(v) == Origin::Added {
                    let ends = g.neighbours(v);
                    let lo = ends[0].min(ends[1]);
                    let hi = ends[0].max(ends[1]);
                    assert!(pos[&lo] < pos[&v] && pos[&v] < pos[&hi]);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let mut g = dotted_complete(3).unwrap();
        g.set_role(0, Role::Computation);
        g.set_role(1, Role::Trap1);
        let j = g.to_json();
        let back = ProtocolGraph::from_json(&j).unwrap();
        assert_eq!(back.n_vertices(), g.n_vertices());
        assert_eq!(back.role(0), Role::Computation);
        assert_eq!(back.role(1), Role::Trap1);
        assert_eq!(back.edges(), g.edges());
    }
}
