//! Full-scale protocol parameters, kept strictly in log domain; the
//! round counts these describe are never materialized.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParamsError {
    #[error("alpha must be at least 128, got {0}")]
    AlphaTooSmall(f64),
    #[error("circuit size must be at least 2, got {0}")]
    SizeTooSmall(f64),
}

/// Round-complexity exponent of the plain two-prover protocol.
pub const RUV_EXPONENT: f64 = 8192.0;
/// Round-complexity exponent of the composite protocol (128 · 16).
pub const COMPOSITE_EXPONENT: f64 = 2048.0;

/// The session-sizing parameters `n_s = n^{α/2}`, `q = 11`, `n_g = q·n_s`,
/// `N ≥ n_g^{α-1}` and `δ = 1/(6 n^{α/8})`, all stored as base-10 logs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RuvParams {
    pub n: f64,
    pub alpha: f64,
}

impl RuvParams {
    pub const Q: f64 = 11.0;

    pub fn new(n: f64, alpha: f64) -> Result<RuvParams, ParamsError> {
        if n < 2.0 {
            return Err(ParamsError::SizeTooSmall(n));
        }
        if alpha < 128.0 {
            return Err(ParamsError::AlphaTooSmall(alpha));
        }
        Ok(RuvParams { n, alpha })
    }

    /// `log10 n_s` with `n_s = n^{α/2}`; `α ≥ 128` makes `n_s ≥ n^{64}`.
    pub fn log10_n_s(&self) -> f64 {
        self.alpha / 2.0 * self.n.log10()
    }

    pub fn log10_n_g(&self) -> f64 {
        Self::Q.log10() + self.log10_n_s()
    }

    /// `log10 N` at the minimum `N = n_g^{α-1}`.
    pub fn log10_big_n(&self) -> f64 {
        (self.alpha - 1.0) * self.log10_n_g()
    }

    /// `log10 δ` with `δ = 1/(6 n^{α/8})`.
    pub fn log10_delta(&self) -> f64 {
        -(6.0f64.log10() + self.alpha / 8.0 * self.n.log10())
    }
}

/// `log10` of the round-complexity lower bound `n^{8192}` of the plain
/// two-prover protocol.
pub fn ruv_round_complexity_log10(n: f64) -> f64 {
    assert!(n >= 2.0);
    RUV_EXPONENT * n.log10()
}

/// `log10` of the composite protocol's round-complexity form `n^{2048}`.
pub fn composite_round_complexity_log10(n: f64) -> f64 {
    assert!(n >= 2.0);
    COMPOSITE_EXPONENT * n.log10()
}
