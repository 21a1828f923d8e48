//! Turning a graph plan plus per-vertex states into an entangled register.

use crate::graph::{GraphError, ProtocolGraph};
use vbqc_qsim::{PureState, STATEVECTOR_QUBIT_CAP};

/// Tensor the per-vertex single-qubit states in vertex order, then apply a
/// controlled-Z for every edge. Qubit `v` of the result is vertex `v`.
pub fn build_graph_state(
    plan: &ProtocolGraph,
    vertex_states: &[PureState],
) -> Result<PureState, GraphError> {
    let n = plan.n_vertices();
    if vertex_states.len() != n {
        return Err(GraphError::Malformed(format!(
            "{} vertex states for {n} vertices",
            vertex_states.len()
        )));
    }
    if n > STATEVECTOR_QUBIT_CAP {
        return Err(GraphError::TooManyQubits(n));
    }
    let pairs: Vec<(vbqc_qsim::C64, vbqc_qsim::C64)> = vertex_states
        .iter()
        .map(|s| {
            if s.n_qubits() != 1 {
                return Err(GraphError::Malformed(
                    "vertex states must be single qubits".into(),
                ));
            }
            Ok((s.amplitudes()[0], s.amplitudes()[1]))
        })
        .collect::<Result<_, _>>()?;
    let mut state = PureState::product(&pairs).map_err(|e| GraphError::Malformed(e.to_string()))?;
    for &(a, b) in plan.edges() {
        state
            .apply_cz(a, b)
            .map_err(|e| GraphError::Malformed(e.to_string()))?;
    }
    Ok(state)
}
