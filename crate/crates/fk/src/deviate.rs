//! Controlled deviations of the protocol input, calibrated so the deviated
//! register sits at an exact trace distance from the ideal one.

use crate::instance::{FkError, FkInstance};
use rand::Rng;
use serde::{Deserialize, Serialize};
use vbqc_graph::Role;
use vbqc_qsim::{Pauli, PureState, C64};

/// How the input is deviated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeviationMode {
    /// A unitary rotation on one uniformly chosen qubit; the deviated input
    /// stays pure and uncorrelated with anything external.
    LocalRotation,
    /// A joint pure state with one environment qubit; tracing out the
    /// environment leaves the input mixed, and the environment half is
    /// available to the adversary.
    EnvCorrelated,
}

/// A deviated protocol input: protocol qubits in vertex order, optionally
/// followed by environment qubits held by the adversary.
#[derive(Debug, Clone)]
pub struct DeviatedInput {
    pub state: PureState,
    pub env_qubits: usize,
    /// The qubit the deviation touched (for analysis only).
    pub deviated_qubit: usize,
    /// The trace distance (1/2 convention) from the ideal input, exact by
    /// construction.
    pub eps: f64,
}

/// Deviate the ideal input of `inst` to trace distance exactly `eps`.
///
/// Local rotations turn one qubit by `2·asin(eps)` about an axis that moves
/// its state (Z for plane qubits, X for dummies), giving a pure product
/// state at overlap `cos(asin eps)`, hence distance `eps`. The correlated
/// mode entangles a flipped branch with an environment qubit at weight
/// `eps`, so the reduced input is `(1-eps)·ideal + eps·flipped`.
pub fn deviate_input(
    inst: &FkInstance,
    eps: f64,
    mode: DeviationMode,
    rng: &mut impl Rng,
) -> Result<DeviatedInput, FkError> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(FkError::BadWireAngles(format!(
            "deviation eps {eps} outside [0, 1]"
        )));
    }
    let ideal = inst.ideal_input()?;
    let n = inst.n_qubits();
    let q = rng.random_range(0..n);
    let is_dummy = inst.graph.role(q) == Role::Dummy;

    match mode {
        DeviationMode::LocalRotation => {
            let alpha = 2.0 * eps.asin();
            let (s, c) = (alpha / 2.0).sin_cos();
            let m: [[C64; 2]; 2] = if is_dummy {
                // Rx moves computational-basis states
                [
                    [C64::new(c, 0.0), C64::new(0.0, -s)],
                    [C64::new(0.0, -s), C64::new(c, 0.0)],
                ]
            } else {
                // Rz moves XY-plane states
                [
                    [C64::new(c, -s), C64::new(0.0, 0.0)],
                    [C64::new(0.0, 0.0), C64::new(c, s)],
                ]
            };
            let mut state = ideal;
            state.apply_single(q, m)?;
            Ok(DeviatedInput {
                state,
                env_qubits: 0,
                deviated_qubit: q,
                eps,
            })
        }
        DeviationMode::EnvCorrelated => {
            // √(1-eps)|ψ⟩|0⟩_E + √eps (P_q|ψ⟩)|1⟩_E with P flipping qubit q
            // to an orthogonal state.
            let mut flipped = ideal.clone();
            flipped.apply_pauli(q, if is_dummy { Pauli::X } else { Pauli::Z })?;
            let a = (1.0 - eps).sqrt();
            let b = eps.sqrt();
            let dim = ideal.amplitudes().len();
            let mut amps = vec![C64::new(0.0, 0.0); dim * 2];
            for i in 0..dim {
                amps[2 * i] = ideal.amplitudes()[i] * a;
                amps[2 * i + 1] = flipped.amplitudes()[i] * b;
            }
            Ok(DeviatedInput {
                state: PureState::from_amplitudes(amps)?,
                env_qubits: 1,
                deviated_qubit: q,
                eps,
            })
        }
    }
}
