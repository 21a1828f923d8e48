//! The single-server verifiable blind computation protocol.
//!
//! A verifier prepares single qubits (`|+_θ⟩` for computation and trap
//! positions, `|0⟩/|1⟩` dummies), sends them to the prover, streams blinded
//! measurement angles `δ_i = θ_i + φ'_i + r_i π`, and accepts only if every
//! trap reports its deterministic expected outcome. This crate implements
//! both parties over exact statevector simulation, pluggable adversary
//! strategies, controlled input deviations, and the Monte Carlo experiments
//! that stress the completeness, soundness and robustness behaviour at
//! desk scale.

mod deviate;
mod experiment;
mod instance;
mod oracle;
mod runner;
mod strategy;

pub use deviate::{deviate_input, DeviatedInput, DeviationMode};
pub use experiment::{
    estimate_completeness, estimate_p_incorrect, CompletenessConfig, EstimateOutcome,
    PIncorrectConfig, TrialFlags,
};
pub use instance::{prepare_input, FkInstance, VerifierSecrets};
pub use oracle::exact_p_incorrect_z_on;
pub use runner::{run_fk, MeasurementRecord, SimRegister, Transcript, Verdict, VerifierMachine};
pub use strategy::{DeviationOp, DeviationStage, ProverStrategy, SharedTape};

/// Soundness upper bound `(2/3)^{⌈2d/5⌉}` as a function of the security
/// parameter `d ≥ 1`.
pub fn soundness_bound(d: u32) -> f64 {
    assert!(d >= 1, "security parameter must be at least 1");
    let exponent = (2 * d).div_ceil(5);
    (2.0f64 / 3.0).powi(exponent as i32)
}
