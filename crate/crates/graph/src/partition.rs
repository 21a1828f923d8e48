//! Hidden role partitioning of dotted-complete graphs.

use crate::graph::{added_between, GraphError, Origin, ProtocolGraph, Role};
use crate::VertexId;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// The computation graph the verifier wants to realize on the computation
/// primaries, given as edges between computation slots `0..size`.
///
/// The edge set must form a union of monotone paths (each connected
/// component is a path whose traversal from its lowest slot visits slots in
/// increasing order). This keeps every wire consistent with the public
/// measurement order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetComputation {
    pub size: usize,
    pub edges: Vec<(usize, usize)>,
}

impl TargetComputation {
    /// A single wire through all `size` slots (`0-1-...-size-1`).
    pub fn wire(size: usize) -> TargetComputation {
        TargetComputation {
            size,
            edges: (1..size).map(|i| (i - 1, i)).collect(),
        }
    }

    /// Isolated slots, no edges.
    pub fn isolated(size: usize) -> TargetComputation {
        TargetComputation {
            size,
            edges: Vec::new(),
        }
    }

    /// Decompose into the slot sequences of each wire, validating the
    /// monotone-path requirement.
    pub fn wires(&self) -> Result<Vec<Vec<usize>>, GraphError> {
        let mut adj = vec![Vec::new(); self.size];
        for &(a, b) in &self.edges {
            if a >= self.size || b >= self.size || a == b {
                return Err(GraphError::InvalidTarget(format!("bad edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for (slot, n) in adj.iter().enumerate() {
            if n.len() > 2 {
                return Err(GraphError::InvalidTarget(format!(
                    "slot {slot} has degree {}",
                    n.len()
                )));
            }
        }
        let mut seen = vec![false; self.size];
        let mut wires = Vec::new();
        for start in 0..self.size {
            if seen[start] || adj[start].len() == 2 {
                continue;
            }
            // walk the path from an endpoint (or an isolated slot)
            let mut wire = vec![start];
            seen[start] = true;
            let mut prev = start;
            let mut cur = start;
            while let Some(&next) = adj[cur].iter().find(|&&v| v != prev && !seen[v]) {
                seen[next] = true;
                wire.push(next);
                prev = cur;
                cur = next;
            }
            // normalize direction, then demand monotonicity
            if wire.len() > 1 && wire[0] > wire[wire.len() - 1] {
                wire.reverse();
            }
            if wire.windows(2).any(|w| w[0] > w[1]) {
                return Err(GraphError::InvalidTarget(format!(
                    "path {wire:?} is not monotone in slot order"
                )));
            }
            wires.push(wire);
        }
        if seen.iter().any(|s| !s) {
            return Err(GraphError::InvalidTarget("edge set contains a cycle".into()));
        }
        wires.sort();
        Ok(wires)
    }
}

/// Pad an odd computation size to the next even one, so that every trap in
/// the dotted-complete graph has an odd number of dummy neighbours.
pub fn padded_size(n: usize) -> usize {
    n + n % 2
}

/// A hidden partition of a dotted-complete graph into computation, trap and
/// dummy roles, together with the slot embedding of the target computation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Partition {
    /// Role per vertex.
    pub roles: Vec<Role>,
    /// Computation primaries in slot order (slot i -> vertex).
    pub computation_slots: Vec<VertexId>,
    /// Trap vertices of both colours.
    pub traps: Vec<VertexId>,
    /// Computation wires as vertex sequences (primaries and kept added
    /// vertices), each increasing in the public measurement order.
    pub wires: Vec<Vec<VertexId>>,
    /// Seed recorded for reproducibility.
    pub seed: u64,
}

impl Partition {
    pub fn n_vertices(&self) -> usize {
        self.roles.len()
    }

    pub fn role(&self, v: VertexId) -> Role {
        self.roles[v]
    }

    pub fn dummies(&self) -> Vec<VertexId> {
        (0..self.roles.len())
            .filter(|&v| self.roles[v] == Role::Dummy)
            .collect()
    }

    /// Whether some trap has an odd number of dummy neighbours. In a dotted
    /// graph on `3N` primaries every trap has `3N - 1` dummy neighbours, so
    /// this holds exactly when `N` is even.
    pub fn has_odd_parity_trap(&self, graph: &ProtocolGraph) -> bool {
        self.traps.iter().any(|&t| {
            graph
                .neighbours(t)
                .iter()
                .filter(|&&u| self.roles[u] == Role::Dummy)
                .count()
                % 2
                == 1
        })
    }

    /// Apply the roles onto a graph (e.g. for export or display).
    pub fn apply_to(&self, graph: &mut ProtocolGraph) {
        for (v, &role) in self.roles.iter().enumerate() {
            graph.set_role(v, role);
        }
    }
}

/// Draw a uniform hidden partition of a dotted-complete graph on `3N`
/// primaries: the primaries are split uniformly into three equal sets
/// (computation, trap 1, trap 2); an added vertex is kept as a computation
/// qubit only when it bridges two computation primaries whose slots are
/// joined in the target; every other added vertex becomes a dummy.
pub fn hidden_partition(
    graph: &ProtocolGraph,
    target: &TargetComputation,
    seed: u64,
    rng: &mut impl Rng,
) -> Result<Partition, GraphError> {
    let primaries = graph.primaries();
    let m = primaries.len();
    if !m.is_multiple_of(3) || m / 3 == 0 {
        return Err(GraphError::Malformed(format!(
            "hidden partition needs 3N primaries, got {m}"
        )));
    }
    let n = m / 3;
    if target.size != n {
        return Err(GraphError::InvalidTarget(format!(
            "target size {} does not match N = {n}",
            target.size
        )));
    }
    for v in 0..graph.n_vertices() {
        if graph.origin(v) == Origin::Added && graph.degree(v) != 2 {
            return Err(GraphError::Malformed(format!(
                "added vertex {v} has degree {}",
                graph.degree(v)
            )));
        }
    }

    let mut shuffled = primaries;
    shuffled.shuffle(rng);
    let mut computation: Vec<VertexId> = shuffled[0..n].to_vec();
    let trap1 = &shuffled[n..2 * n];
    let trap2 = &shuffled[2 * n..3 * n];
    // Slots follow vertex order so wire directions agree with the public
    // measurement order.
    computation.sort_unstable();

    let mut roles = vec![Role::Dummy; graph.n_vertices()];
    for &v in &computation {
        roles[v] = Role::Computation;
    }
    for &v in trap1 {
        roles[v] = Role::Trap1;
    }
    for &v in trap2 {
        roles[v] = Role::Trap2;
    }

    // Kept added vertices realize the target edges inside the computation set.
    let slot_wires = target.wires()?;
    let mut wires = Vec::with_capacity(slot_wires.len());
    for slot_wire in &slot_wires {
        let mut wire = Vec::new();
        for (k, &slot) in slot_wire.iter().enumerate() {
            let v = computation[slot];
            if k > 0 {
                let prev = computation[slot_wire[k - 1]];
                let bridge = added_between(graph, prev.min(v), prev.max(v)).ok_or_else(|| {
                    GraphError::Malformed(format!("no added vertex between {prev} and {v}"))
                })?;
                roles[bridge] = Role::Computation;
                wire.push(bridge);
            }
            wire.push(v);
        }
        wires.push(wire);
    }

    let mut traps: Vec<VertexId> = trap1.iter().chain(trap2).copied().collect();
    traps.sort_unstable();

    Ok(Partition {
        roles,
        computation_slots: computation,
        traps,
        wires,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::dotted_complete;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn partition_for(n: usize, seed: u64) -> (ProtocolGraph, Partition) {
        let g = dotted_complete(3 * n).unwrap();
        let target = TargetComputation::wire(n);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let p = hidden_partition(&g, &target, seed, &mut rng).unwrap();
        (g, p)
    }

    #[test]
    fn roles_partition_the_vertices() {
        let (g, p) = partition_for(2, 7);
        assert_eq!(p.roles.len(), g.n_vertices());
        let comp = p.roles.iter().filter(|r| **r == Role::Computation).count();
        let t1 = p.roles.iter().filter(|r| **r == Role::Trap1).count();
        let t2 = p.roles.iter().filter(|r| **r == Role::Trap2).count();
        // 2 computation primaries + 1 kept added vertex on the wire
        assert_eq!(comp, 3);
        assert_eq!(t1, 2);
        assert_eq!(t2, 2);
    }

    #[test]
    fn traps_are_isolated_by_dummies() {
        for seed in 0..50 {
            let (g, p) = partition_for(2, seed);
            for &t in &p.traps {
                for &u in g.neighbours(t) {
                    assert_eq!(p.roles[u], Role::Dummy, "trap {t} touches non-dummy {u}");
                }
            }
        }
    }

    #[test]
    fn padded_trap_parity_is_odd() {
        // N = 1 padded to 2: traps have 3*2 - 1 = 5 dummy neighbours.
        assert_eq!(padded_size(1), 2);
        let (g, p) = partition_for(padded_size(1), 3);
        for &t in &p.traps {
            let dummies = g
                .neighbours(t)
                .iter()
                .filter(|&&u| p.roles[u] == Role::Dummy)
                .count();
            assert_eq!(dummies, 5);
        }
        assert!(p.has_odd_parity_trap(&g));
    }

    #[test]
    fn equal_seeds_equal_partitions() {
        let (_, a) = partition_for(2, 99);
        let (_, b) = partition_for(2, 99);
        assert_eq!(a.roles, b.roles);
        assert_eq!(a.wires, b.wires);
    }

    #[test]
    fn property_sweep_over_seeds() {
        let g = dotted_complete(6).unwrap();
        let target = TargetComputation::wire(2);
        for seed in 0..1000u64 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let p = hidden_partition(&g, &target, seed, &mut rng).unwrap();
            // every vertex got a role
            assert!(p.roles.iter().all(|r| *r != Role::Unassigned));
            // trap isolation
            for &t in &p.traps {
                assert!(g.neighbours(t).iter().all(|&u| p.roles[u] == Role::Dummy));
            }
            // odd-parity trap exists (N = 2 is even)
            assert!(p.has_odd_parity_trap(&g));
            // wires increase along the measurement order
            let pos: std::collections::HashMap<_, _> = g
                .measurement_order()
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, i))
                .collect();
            for wire in &p.wires {
                assert!(wire.windows(2).all(|w| pos[&w[0]] < pos[&w[1]]));
            }
        }
    }

    #[test]
    fn non_monotone_targets_rejected() {
        let bad = TargetComputation {
            size: 3,
            edges: vec![(0, 2), (2, 1)],
        };
        assert!(bad.wires().is_err());

        let cycle = TargetComputation {
            size: 3,
            edges: vec![(0, 1), (1, 2), (0, 2)],
        };
        assert!(cycle.wires().is_err());

        let ok = TargetComputation::wire(4);
        assert_eq!(ok.wires().unwrap(), vec![vec![0, 1, 2, 3]]);
    }
}
