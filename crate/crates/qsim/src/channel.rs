//! Depolarizing channels, in exact (density) and trajectory (sampled) form.

use crate::density::DensityMatrix;
use crate::error::{QsimError, Result};
use crate::state::PureState;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Single-qubit Pauli operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// How a channel is applied to a register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChannelMode {
    /// Apply the channel exactly; pure inputs are promoted to density form.
    Exact,
    /// Sample one Kraus branch (a Pauli) with the channel's probabilities;
    /// the register stays in its current representation.
    Trajectory,
}

/// A quantum register in either representation. Channels with an explicit
/// [`ChannelMode`] operate on this; protocol code that knows its
/// representation uses [`PureState`] and [`DensityMatrix`] directly.
#[derive(Debug, Clone)]
pub enum Register {
    Pure(PureState),
    Density(DensityMatrix),
}

impl Register {
    pub fn n_qubits(&self) -> usize {
        match self {
            Register::Pure(s) => s.n_qubits(),
            Register::Density(d) => d.n_qubits(),
        }
    }

    /// The density form (promoting a pure state).
    pub fn into_density(self) -> crate::error::Result<DensityMatrix> {
        match self {
            Register::Pure(s) => DensityMatrix::from_pure(&s),
            Register::Density(d) => Ok(d),
        }
    }
}

impl From<PureState> for Register {
    fn from(s: PureState) -> Register {
        Register::Pure(s)
    }
}

impl From<DensityMatrix> for Register {
    fn from(d: DensityMatrix) -> Register {
        Register::Density(d)
    }
}

/// Single-qubit depolarizing channel with an explicit mode. Exact mode
/// promotes pure inputs to density form; trajectory mode samples one Pauli
/// and applies it in place.
pub fn depolarize1_mode(
    reg: Register,
    q: usize,
    noise: NoiseParams,
    mode: ChannelMode,
    rng: &mut impl Rng,
) -> crate::error::Result<Register> {
    match mode {
        ChannelMode::Exact => {
            let rho = reg.into_density()?;
            Ok(Register::Density(depolarize1(&rho, q, noise)?))
        }
        ChannelMode::Trajectory => {
            let p = sample_pauli1(noise, rng);
            match reg {
                Register::Pure(mut s) => {
                    s.apply_pauli(q, p)?;
                    Ok(Register::Pure(s))
                }
                Register::Density(d) => {
                    let (swap, phase) = d.masks_for(q, p);
                    let mut out = d.clone();
                    out.replace_matrix(d.pauli_conjugate(swap, phase));
                    Ok(Register::Density(out))
                }
            }
        }
    }
}

/// Two-qubit depolarizing channel with an explicit mode.
pub fn depolarize2_mode(
    reg: Register,
    a: usize,
    b: usize,
    noise: NoiseParams,
    mode: ChannelMode,
    rng: &mut impl Rng,
) -> crate::error::Result<Register> {
    match mode {
        ChannelMode::Exact => {
            let rho = reg.into_density()?;
            Ok(Register::Density(depolarize2(&rho, a, b, noise)?))
        }
        ChannelMode::Trajectory => {
            let (pa, pb) = sample_pauli2(noise, rng);
            match reg {
                Register::Pure(mut s) => {
                    s.apply_pauli(a, pa)?;
                    s.apply_pauli(b, pb)?;
                    Ok(Register::Pure(s))
                }
                Register::Density(d) => {
                    let (sa, fa) = d.masks_for(a, pa);
                    let (sb, fb) = d.masks_for(b, pb);
                    let mut out = d.clone();
                    out.replace_matrix(d.pauli_conjugate(sa | sb, fa | fb));
                    Ok(Register::Density(out))
                }
            }
        }
    }
}

impl Pauli {
    pub const NONTRIVIAL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
}

/// Error probability of a partially depolarizing channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    p: f64,
}

impl NoiseParams {
    pub fn new(p: f64) -> Result<NoiseParams> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(QsimError::InvalidProbability(p));
        }
        Ok(NoiseParams { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Exact single-qubit depolarizing channel on a density matrix:
/// `ρ -> (1-p) ρ + (p/3)(XρX + YρY + ZρZ)` on qubit `q`.
pub fn depolarize1(rho: &DensityMatrix, q: usize, noise: NoiseParams) -> Result<DensityMatrix> {
    rho.check_qubit(q)?;
    let p = noise.p();
    let mut acc = rho.matrix().scale(1.0 - p);
    for pauli in Pauli::NONTRIVIAL {
        let (swap, phase) = rho.masks_for(q, pauli);
        acc += rho.pauli_conjugate(swap, phase).scale(p / 3.0);
    }
    let mut out = rho.clone();
    out.replace_matrix(acc);
    Ok(out)
}

/// Exact two-qubit depolarizing channel: `(1-p)[I⊗I] + (p/15) Σ [P⊗Q]` over
/// the fifteen nontrivial Pauli pairs, acting on qubits `(a, b)`.
pub fn depolarize2(
    rho: &DensityMatrix,
    a: usize,
    b: usize,
    noise: NoiseParams,
) -> Result<DensityMatrix> {
    rho.check_qubit(a)?;
    rho.check_qubit(b)?;
    if a == b {
        return Err(QsimError::Internal(
            "two-qubit channel requires distinct qubits".into(),
        ));
    }
    let p = noise.p();
    let mut acc = rho.matrix().scale(1.0 - p);
    for pa in Pauli::ALL {
        for pb in Pauli::ALL {
            if pa == Pauli::I && pb == Pauli::I {
                continue;
            }
            let (sa, fa) = rho.masks_for(a, pa);
            let (sb, fb) = rho.masks_for(b, pb);
            acc += rho.pauli_conjugate(sa | sb, fa | fb).scale(p / 15.0);
        }
    }
    let mut out = rho.clone();
    out.replace_matrix(acc);
    Ok(out)
}

/// Trajectory mode: sample which Pauli the single-qubit channel applies.
pub fn sample_pauli1(noise: NoiseParams, rng: &mut impl Rng) -> Pauli {
    let u: f64 = rng.random();
    if u >= noise.p() {
        Pauli::I
    } else {
        Pauli::NONTRIVIAL[(u / noise.p() * 3.0) as usize % 3]
    }
}

/// Trajectory mode for the two-qubit channel: one of the fifteen nontrivial
/// pairs with probability p/15 each, identity otherwise.
pub fn sample_pauli2(noise: NoiseParams, rng: &mut impl Rng) -> (Pauli, Pauli) {
    let u: f64 = rng.random();
    if u >= noise.p() {
        return (Pauli::I, Pauli::I);
    }
    let k = ((u / noise.p() * 15.0) as usize % 15) + 1;
    (Pauli::ALL[k / 4], Pauli::ALL[k % 4])
}

/// Apply a sampled single-qubit trajectory step to a pure state.
pub fn apply_trajectory1(
    psi: &mut PureState,
    q: usize,
    noise: NoiseParams,
    rng: &mut impl Rng,
) -> Result<Pauli> {
    let p = sample_pauli1(noise, rng);
    psi.apply_pauli(q, p)?;
    Ok(p)
}
