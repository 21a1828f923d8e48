//! Prover behaviours. A strategy sees the received qubits, the public graph
//! and the streamed measurement angles: never the verifier's secrets.

use serde::{Deserialize, Serialize};
use vbqc_qsim::{Pauli, C64};

/// When a unitary deviation is injected relative to the honest entangling
/// step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeviationStage {
    BeforeEntangle,
    AfterEntangle,
}

/// A primitive deviation applied to the prover's register. Slots index the
/// protocol qubits; environment qubits (if the adversary holds any) follow
/// at slots `n_vertices..`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DeviationOp {
    PauliOp { slot: usize, pauli: Pauli },
    RotateX { slot: usize, angle: f64 },
    RotateY { slot: usize, angle: f64 },
    RotateZ { slot: usize, angle: f64 },
    Hadamard { slot: usize },
    ExtraCz { a: usize, b: usize },
}

impl DeviationOp {
    /// The 2x2 matrix for single-qubit ops (None for `ExtraCz`).
    pub fn single_matrix(&self) -> Option<(usize, [[C64; 2]; 2])> {
        let c = |re: f64, im: f64| C64::new(re, im);
        match *self {
            DeviationOp::PauliOp { .. } | DeviationOp::ExtraCz { .. } => None,
            DeviationOp::RotateX { slot, angle } => {
                let (s, co) = (angle / 2.0).sin_cos();
                Some((slot, [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]))
            }
            DeviationOp::RotateY { slot, angle } => {
                let (s, co) = (angle / 2.0).sin_cos();
                Some((slot, [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]))
            }
            DeviationOp::RotateZ { slot, angle } => {
                let (s, co) = (angle / 2.0).sin_cos();
                Some((slot, [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]]))
            }
            DeviationOp::Hadamard { slot } => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                Some((slot, [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]))
            }
        }
    }
}

/// A classical tape pre-shared between colluding parties; deviations read
/// it but parties never communicate once a protocol starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharedTape {
    pub words: Vec<u64>,
}

impl SharedTape {
    /// Deterministic value in [-1, 1] for the given tape position.
    pub fn signal(&self, position: usize) -> f64 {
        if self.words.is_empty() {
            return 0.0;
        }
        let w = self.words[position % self.words.len()];
        (w as f64 / u64::MAX as f64) * 2.0 - 1.0
    }
}

/// The prover behaviours exercised by the experiments.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ProverStrategy {
    /// Entangle per the public graph, measure as instructed.
    Honest,
    /// Honest, plus a fixed unitary deviation on the register.
    UnitaryDeviation {
        stage: DeviationStage,
        ops: Vec<DeviationOp>,
    },
    /// Apply the XY-plane reflection to the received input, then honest.
    ReflectAll,
    /// With probability `prob`, apply Z to every protocol qubit after
    /// entangling (flips every plane qubit's outcome, so every trap).
    FlipAll { prob: f64 },
    /// Tape-correlated deviation: each protocol qubit is Z-rotated by
    /// `max_angle * signal(qubit)` after entangling.
    Correlated {
        tape: SharedTape,
        max_angle: f64,
    },
    /// Answers a constant out-of-range value; used to exercise the
    /// malformed-reply abort path.
    Malformed,
}

impl ProverStrategy {
    /// Short descriptor for reports.
    pub fn descriptor(&self) -> String {
        match self {
            ProverStrategy::Honest => "honest".into(),
            ProverStrategy::UnitaryDeviation { stage, ops } => {
                format!("unitary-deviation({:?}, {} ops)", stage, ops.len())
            }
            ProverStrategy::ReflectAll => "reflect-all".into(),
            ProverStrategy::FlipAll { prob } => format!("flip-all(q={prob})"),
            ProverStrategy::Correlated { max_angle, .. } => {
                format!("correlated(max_angle={max_angle})")
            }
            ProverStrategy::Malformed => "malformed".into(),
        }
    }
}
