use thiserror::Error;

/// Errors surfaced by the simulation substrate.
#[derive(Debug, Error)]
pub enum QsimError {
    #[error("angle {0} is not a multiple of pi/4")]
    InvalidAngle(f64),
    #[error("bloch vector ({0}, {1}, {2}) is not unit norm")]
    InvalidBlochVector(f64, f64, f64),
    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("{requested} qubits exceeds the {cap}-qubit cap for {representation} registers")]
    CapExceeded {
        requested: usize,
        cap: usize,
        representation: &'static str,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("subsystem mask must be a nonempty proper subset of the qubits")]
    InvalidSubsystemMask,
    #[error("matrix is not a valid density operator: {0}")]
    NotDensityOperator(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, QsimError>;
