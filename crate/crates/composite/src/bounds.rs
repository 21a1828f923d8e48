//! The composite protocol's completeness/soundness forms. The asymptotic
//! constants are unknown; only the exponents and the concrete security-
//! parameter term are pinned.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompositeBounds {
    /// `(2/3)^{⌈2d/5⌉}`, evaluated.
    pub soundness_constant: f64,
    /// The deviation exponent in the completeness floor `1 - O(n^e)`.
    pub completeness_exponent: f64,
    /// The additive soundness exponent in `(2/3)^{⌈2d/5⌉} + O(n^e)`.
    pub soundness_exponent: f64,
    pub completeness_form: String,
    pub soundness_form: String,
}

/// Symbolic completeness/soundness forms for circuit size `n` and security
/// parameter `d`.
pub fn composite_bounds(n: f64, d: u32) -> CompositeBounds {
    assert!(n >= 2.0 && d >= 1);
    let soundness_constant = vbqc_fk::soundness_bound(d);
    CompositeBounds {
        soundness_constant,
        completeness_exponent: -1.0 / 128.0,
        soundness_exponent: -1.0 / 12.0,
        completeness_form: "1 - O(n^(-1/128))".to_string(),
        soundness_form: format!("{soundness_constant:.5} + O(n^(-1/12))"),
    }
}
