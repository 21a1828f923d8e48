//! Distance and closeness measures between quantum states.

use crate::density::DensityMatrix;
use crate::error::{QsimError, Result};
use crate::state::PureState;
use crate::C64;
use nalgebra::DMatrix;

/// Schatten-1 norm of a Hermitian matrix: the sum of absolute eigenvalues,
/// with no 1/2 factor.
pub fn trace_norm(m: &DMatrix<C64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum()
}

/// Trace distance with the 1/2 convention: orthogonal pure states are at
/// distance exactly 1.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(QsimError::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    Ok(0.5 * trace_norm(&(rho.matrix() - sigma.matrix())))
}

/// `⟨ψ| ρ |ψ⟩` for a pure reference state.
pub fn fidelity_with_pure(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    if rho.dim() != psi.amplitudes().len() {
        return Err(QsimError::DimensionMismatch {
            left: rho.dim(),
            right: psi.amplitudes().len(),
        });
    }
    let amps = psi.amplitudes();
    let mut acc = C64::new(0.0, 0.0);
    for r in 0..rho.dim() {
        for c in 0..rho.dim() {
            acc += amps[r].conj() * rho.matrix()[(r, c)] * amps[c];
        }
    }
    Ok(acc.re)
}

/// The quantities checked by the gentle-measurement inequality
/// `‖ρ - π ⊗ Tr_1 ρ‖ ≤ 2√δ + δ`, where `δ = 1 - Tr(π Tr_2 ρ)` and the
/// left-hand norm follows the un-halved (Schatten-1) convention. Both norm
/// conventions are reported so the factor of two stays visible.
#[derive(Debug, Clone, Copy)]
pub struct GentleMeasurementGap {
    /// `1 - Tr(π Tr_2 ρ)`.
    pub delta: f64,
    /// Un-halved trace norm of `ρ - π ⊗ Tr_1 ρ` (the corollary's left side).
    pub lhs: f64,
    /// The same quantity with the 1/2 convention.
    pub lhs_halved: f64,
    /// `2√δ + δ`.
    pub bound: f64,
}

impl GentleMeasurementGap {
    pub fn holds(&self) -> bool {
        self.lhs <= self.bound + 1e-9
    }
}

/// Evaluate the gentle-measurement inequality for a bipartite state whose
/// first `k` qubits form subsystem 1 and `π = |ψ⟩⟨ψ|` lives on subsystem 1.
pub fn gentle_measurement_gap(
    rho: &DensityMatrix,
    k: usize,
    pi: &PureState,
) -> Result<GentleMeasurementGap> {
    let n = rho.n_qubits();
    if k == 0 || k >= n {
        return Err(QsimError::InvalidSubsystemMask);
    }
    if pi.n_qubits() != k {
        return Err(QsimError::DimensionMismatch {
            left: 1 << k,
            right: pi.amplitudes().len(),
        });
    }
    let keep_first: Vec<bool> = (0..n).map(|q| q < k).collect();
    let keep_second: Vec<bool> = (0..n).map(|q| q >= k).collect();
    let rho_1 = rho.partial_trace_keep(&keep_first)?;
    let rho_2 = rho.partial_trace_keep(&keep_second)?;
    let delta = (1.0 - fidelity_with_pure(&rho_1, pi)?).max(0.0);
    let pi_dense = DensityMatrix::from_pure(pi)?;
    let product = pi_dense.tensor(&rho_2)?;
    let lhs = trace_norm(&(rho.matrix() - product.matrix()));
    Ok(GentleMeasurementGap {
        delta,
        lhs,
        lhs_halved: 0.5 * lhs,
        bound: 2.0 * delta.sqrt() + delta,
    })
}

/// Trace norm of the correlation operator `ρ_corr = ρ_AB - ρ_A ⊗ ρ_B`,
/// reported in both conventions, together with the distance of `ρ_A` from a
/// pure reference when one is supplied. When
/// `ε = ‖ρ_A - |ψ⟩⟨ψ|‖` (un-halved), the norm obeys `2√ε + 2ε`.
#[derive(Debug, Clone, Copy)]
pub struct CorrelationNorm {
    /// Un-halved trace norm of `ρ_corr`.
    pub norm: f64,
    /// The same with the 1/2 convention.
    pub halved: f64,
    /// `ε` as the un-halved trace distance of `ρ_A` from the reference.
    pub eps_distance: Option<f64>,
    /// `1 - ⟨ψ|ρ_A|ψ⟩` for the reference.
    pub eps_fidelity: Option<f64>,
}

impl CorrelationNorm {
    /// `2√ε + 2ε` with `ε` the un-halved distance premise.
    pub fn bound(&self) -> Option<f64> {
        self.eps_distance.map(|e| 2.0 * e.sqrt() + 2.0 * e)
    }

    pub fn holds(&self) -> Option<bool> {
        self.bound().map(|b| self.norm <= b + 1e-9)
    }
}

/// Compute the correlation norm of a bipartite state split after qubit `k`,
/// optionally against a pure reference `ψ` for subsystem A.
pub fn correlation_norm(
    rho: &DensityMatrix,
    k: usize,
    reference: Option<&PureState>,
) -> Result<CorrelationNorm> {
    let n = rho.n_qubits();
    if k == 0 || k >= n {
        return Err(QsimError::InvalidSubsystemMask);
    }
    let keep_a: Vec<bool> = (0..n).map(|q| q < k).collect();
    let keep_b: Vec<bool> = (0..n).map(|q| q >= k).collect();
    let rho_a = rho.partial_trace_keep(&keep_a)?;
    let rho_b = rho.partial_trace_keep(&keep_b)?;
    let product = rho_a.tensor(&rho_b)?;
    let norm = trace_norm(&(rho.matrix() - product.matrix()));
    let (eps_distance, eps_fidelity) = match reference {
        Some(psi) => {
            let psi_dense = DensityMatrix::from_pure(psi)?;
            let dist = trace_norm(&(rho_a.matrix() - psi_dense.matrix()));
            let fid = fidelity_with_pure(&rho_a, psi)?;
            (Some(dist), Some((1.0 - fid).max(0.0)))
        }
        None => (None, None),
    };
    Ok(CorrelationNorm {
        norm,
        halved: 0.5 * norm,
        eps_distance,
        eps_fidelity,
    })
}
