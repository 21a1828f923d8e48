//! Verifier-side protocol instances: the graph, hidden roles and the
//! private random tape.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use vbqc_graph::{
    dotted_complete, hidden_partition, line_graph, GraphError, ProtocolGraph, Role,
    TargetComputation, VertexId,
};
use vbqc_qsim::{basis_qubit, plus_theta, Angle, PureState, QsimError};

#[derive(Debug, Error)]
pub enum FkError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error("wire angles do not match the wire layout: {0}")]
    BadWireAngles(String),
    #[error("trap angles must be 0 or pi")]
    BadTrapAngle,
}

/// The verifier's private random tape for one protocol run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifierSecrets {
    /// `θ_v` for plane (computation and trap) qubits, `None` for dummies.
    pub theta: Vec<Option<Angle>>,
    /// Outcome-blinding bit `r_v` for every plane qubit.
    pub r: Vec<u8>,
    /// `|0⟩/|1⟩` value per dummy qubit.
    pub dummy_value: Vec<Option<u8>>,
    /// Pre-drawn uniform measurement angles for dummies.
    pub dummy_delta: Vec<Option<Angle>>,
    /// Pattern angle per vertex: the computation angle `φ_v` for
    /// computation qubits, the trap angle (0 or pi) for traps.
    pub pattern_angle: Vec<Option<Angle>>,
    /// Root seed this tape was drawn from.
    pub seed: u64,
}

/// One fully specified protocol instance: public structure plus secrets.
#[derive(Debug, Clone)]
pub struct FkInstance {
    /// The public graph, with the hidden roles applied to its tags.
    pub graph: ProtocolGraph,
    /// Computation wires (vertex sequences increasing in measurement order).
    pub wires: Vec<Vec<VertexId>>,
    pub secrets: VerifierSecrets,
}

fn draw_secrets(
    graph: &ProtocolGraph,
    wires: &[Vec<VertexId>],
    wire_angles: Option<&[Vec<Angle>]>,
    seed: u64,
    rng: &mut impl Rng,
) -> Result<VerifierSecrets, FkError> {
    let n = graph.n_vertices();
    let mut theta = vec![None; n];
    let mut r = vec![0u8; n];
    let mut dummy_value = vec![None; n];
    let mut dummy_delta = vec![None; n];
    let mut pattern_angle = vec![None; n];

    if let Some(angles) = wire_angles {
        if angles.len() != wires.len()
            || angles.iter().zip(wires).any(|(a, w)| a.len() != w.len())
        {
            return Err(FkError::BadWireAngles(format!(
                "{} wires in layout, {} angle rows",
                wires.len(),
                angles.len()
            )));
        }
    }

    for v in 0..n {
        match graph.role(v) {
            Role::Dummy => {
                dummy_value[v] = Some(rng.random_range(0..2u8));
                dummy_delta[v] = Some(Angle::from_multiple(rng.random_range(0..8i64)));
            }
            Role::Computation => {
                theta[v] = Some(Angle::from_multiple(rng.random_range(0..8i64)));
                r[v] = rng.random_range(0..2u8);
            }
            Role::Trap1 | Role::Trap2 => {
                theta[v] = Some(Angle::from_multiple(rng.random_range(0..8i64)));
                r[v] = rng.random_range(0..2u8);
                // trap measurement angle randomly fixed to 0 or pi
                pattern_angle[v] = Some(if rng.random_range(0..2u8) == 0 {
                    Angle::ZERO
                } else {
                    Angle::PI
                });
            }
            Role::Unassigned => {
                return Err(FkError::BadWireAngles(format!("vertex {v} has no role")))
            }
        }
    }
    for (w, wire) in wires.iter().enumerate() {
        for (k, &v) in wire.iter().enumerate() {
            pattern_angle[v] = Some(match wire_angles {
                Some(angles) => angles[w][k],
                None => Angle::ZERO,
            });
        }
    }

    Ok(VerifierSecrets {
        theta,
        r,
        dummy_value,
        dummy_delta,
        pattern_angle,
        seed,
    })
}

impl FkInstance {
    /// Instance on the dotted-complete graph delegating a computation of
    /// size `n`: `3n` primaries are hidden-partitioned, the target edges are
    /// realized through kept added vertices, and all angles are drawn.
    ///
    /// `wire_angles` follows the layout of `target.wires()` (slot paths with
    /// kept added vertices interleaved); `None` means all-zero angles.
    pub fn dotted(
        n: usize,
        target: &TargetComputation,
        wire_angles: Option<&[Vec<Angle>]>,
        seed: u64,
        rng: &mut impl Rng,
    ) -> Result<FkInstance, FkError> {
        let mut graph = dotted_complete(3 * n)?;
        let partition = hidden_partition(&graph, target, seed, rng)?;
        partition.apply_to(&mut graph);
        let wires = partition.wires.clone();
        let secrets = draw_secrets(&graph, &wires, wire_angles, seed, rng)?;
        Ok(FkInstance {
            graph,
            wires,
            secrets,
        })
    }

    /// Instance on the single-trap line graph with `n` qubits; computation
    /// angles are zero (the wires realize identity-style patterns).
    pub fn line(n: usize, seed: u64, rng: &mut impl Rng) -> Result<FkInstance, FkError> {
        let graph = line_graph(n, rng)?;
        let wires = wires_of_line(&graph);
        let secrets = draw_secrets(&graph, &wires, None, seed, rng)?;
        Ok(FkInstance {
            graph,
            wires,
            secrets,
        })
    }

    /// Line instance whose wire patterns all read out deterministically as
    /// 0 whatever the trap position: odd wires keep zero angles (an even
    /// count of J(0) = H gates returns the wire to `|+⟩`), even wires get a
    /// `π/2` bookend at each end, which parks the wire state on the XY
    /// plane for the readout. Used where every honest encoding must agree
    /// on a logical output.
    pub fn line_deterministic(n: usize, seed: u64, rng: &mut impl Rng) -> Result<FkInstance, FkError> {
        let graph = line_graph(n, rng)?;
        let wires = wires_of_line(&graph);
        let angles: Vec<Vec<Angle>> = wires.iter().map(|w| deterministic_wire_angles(w.len())).collect();
        let secrets = draw_secrets(&graph, &wires, Some(&angles), seed, rng)?;
        Ok(FkInstance {
            graph,
            wires,
            secrets,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.graph.n_vertices()
    }

    /// Trap vertices with their expected (deterministic) outcomes.
    ///
    /// A trap `t` measured at `δ_t = θ_t + φ_t + r_t π` reports
    /// `r_t ⊕ k_t ⊕ [φ_t = π]` when honest, where `k_t` is the parity of
    /// its `|1⟩`-valued dummy neighbours (each such dummy imprints a Z on
    /// the trap during entangling).
    pub fn trap_expectations(&self) -> Vec<(VertexId, u8)> {
        (0..self.n_qubits())
            .filter(|&v| self.graph.role(v).is_trap())
            .map(|v| {
                let k = self.graph.one_dummy_parity(v, &self.secrets.dummy_value);
                let phi_pi = u8::from(self.secrets.pattern_angle[v] == Some(Angle::PI));
                (v, self.secrets.r[v] ^ k ^ phi_pi)
            })
            .collect()
    }

    /// The ideal product input state, vertex order.
    pub fn ideal_input(&self) -> Result<PureState, FkError> {
        prepare_input(self)
    }
}

/// Angles making a wire of the given length read out 0 deterministically
/// (measuring at angle φ applies J(-φ); see the runner docs). Odd wires:
/// an even number of H gates returns |+⟩ for the angle-0 readout. Even
/// wires: J(-π/2) parks the state at Bloch (0,1,0), the H chain toggles it
/// an even number of times, and the π/2 readout matches it exactly.
fn deterministic_wire_angles(len: usize) -> Vec<Angle> {
    if len % 2 == 1 {
        vec![Angle::ZERO; len]
    } else {
        let mut v = vec![Angle::ZERO; len];
        v[0] = Angle::from_multiple(2);
        v[len - 1] = Angle::from_multiple(2);
        v
    }
}

/// Computation wires of a role-tagged line graph: maximal runs of
/// consecutive computation vertices.
pub(crate) fn wires_of_line(graph: &ProtocolGraph) -> Vec<Vec<VertexId>> {
    let mut wires = Vec::new();
    let mut current = Vec::new();
    for v in 0..graph.n_vertices() {
        if graph.role(v) == Role::Computation {
            current.push(v);
        } else if !current.is_empty() {
            wires.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        wires.push(current);
    }
    wires
}

/// Tensor product of the per-qubit states the verifier sends: `|+_θ⟩` for
/// plane qubits, `|0⟩/|1⟩` for dummies, in vertex order.
pub fn prepare_input(inst: &FkInstance) -> Result<PureState, FkError> {
    let mut qubits = Vec::with_capacity(inst.n_qubits());
    for v in 0..inst.n_qubits() {
        let s = match inst.graph.role(v) {
            Role::Dummy => basis_qubit(inst.secrets.dummy_value[v].expect("dummy value")),
            _ => plus_theta(inst.secrets.theta[v].expect("plane angle")),
        };
        qubits.push((s.amplitudes()[0], s.amplitudes()[1]));
    }
    Ok(PureState::product(&qubits)?)
}
