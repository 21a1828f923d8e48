//! Exact quantum simulation substrate for small systems.
//!
//! Everything protocol-level in this workspace runs on the two state
//! representations provided here: pure statevectors (up to
//! [`STATEVECTOR_QUBIT_CAP`] qubits) and dense density matrices (up to
//! [`DENSITY_QUBIT_CAP`] qubits). Both caps are hard errors, not
//! heuristics, so memory use stays predictable.
//!
//! # Qubit ordering
//!
//! Basis indices are **big-endian in the qubit index**: qubit 0 is the most
//! significant bit of the basis-state index. A three-qubit basis state
//! `|b0 b1 b2⟩` lives at index `b0·4 + b1·2 + b2`. Every module in this
//! workspace uses this convention; helpers like [`PureState::bit_of`] exist
//! so callers never hand-roll the shift arithmetic.
//!
//! # Norm conventions
//!
//! [`metrics::trace_distance`] carries the 1/2 factor (orthogonal pure
//! states are at distance 1). [`metrics::trace_norm`] is the raw
//! Schatten-1 norm without the factor. Inequality checks that are
//! sensitive to the convention ([`metrics::gentle_measurement_gap`],
//! [`metrics::correlation_norm`]) expose both values so no factor of two
//! can hide in a passing test.

pub mod angle;
pub mod channel;
pub mod density;
pub mod error;
pub mod metrics;
pub mod state;

pub use angle::{Angle, BlochVector};
pub use channel::{
    depolarize1, depolarize1_mode, depolarize2, depolarize2_mode, sample_pauli1, sample_pauli2,
    ChannelMode, NoiseParams, Pauli, Register,
};
pub use density::DensityMatrix;
pub use error::{QsimError, Result};
pub use metrics::{
    correlation_norm, fidelity_with_pure, gentle_measurement_gap, trace_distance, trace_norm,
    CorrelationNorm, GentleMeasurementGap,
};
pub use state::{basis_qubit, bell_state, plus_theta, BellKind, PureState};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;

/// Maximum number of qubits representable as a statevector (2^22 amplitudes).
pub const STATEVECTOR_QUBIT_CAP: usize = 22;

/// Maximum number of qubits representable as a dense density matrix.
pub const DENSITY_QUBIT_CAP: usize = 10;

/// Tolerance for state invariants (norms, hermiticity, positivity).
pub const TOL_INVARIANT: f64 = 1e-10;

/// Tolerance for composed-operation checks.
pub const TOL_COMPOSED: f64 = 1e-9;
