//! Named bound checks attached to experiment reports.

use serde::{Deserialize, Serialize};

/// How an observed value is compared against its reference bound.
///
/// Monte Carlo estimates of a probability that sits close to its bound need
/// statistical slack: the `*ThreeSigma` variants allow the sampling error
/// before declaring a violation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CheckKind {
    /// observed == reference exactly (bitwise for frequencies like 1.0).
    Exact,
    /// observed >= reference.
    AtLeast,
    /// observed <= reference.
    AtMost,
    /// |observed - reference| <= tol.
    WithinTolerance { tol: f64 },
    /// |observed - reference| <= 3 sigma.
    WithinThreeSigma { sigma: f64 },
    /// observed <= reference + 3 sigma.
    AtMostThreeSigma { sigma: f64 },
    /// observed >= reference - 3 sigma.
    AtLeastThreeSigma { sigma: f64 },
}

/// One bound check: the anchor names the inequality being verified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub anchor: String,
    pub observed: f64,
    pub reference: f64,
    pub kind: CheckKind,
    pub pass: bool,
}

impl BoundCheck {
    pub fn new(anchor: impl Into<String>, observed: f64, reference: f64, kind: CheckKind) -> Self {
        let pass = match kind {
            CheckKind::Exact => observed == reference,
            CheckKind::AtLeast => observed >= reference,
            CheckKind::AtMost => observed <= reference,
            CheckKind::WithinTolerance { tol } => (observed - reference).abs() <= tol,
            CheckKind::WithinThreeSigma { sigma } => (observed - reference).abs() <= 3.0 * sigma,
            CheckKind::AtMostThreeSigma { sigma } => observed <= reference + 3.0 * sigma,
            CheckKind::AtLeastThreeSigma { sigma } => observed >= reference - 3.0 * sigma,
        };
        BoundCheck {
            anchor: anchor.into(),
            observed,
            reference,
            kind,
            pass,
        }
    }

    /// Binomial standard error for a frequency estimated from `trials` samples.
    pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
        (p.clamp(0.0, 1.0) * (1.0 - p.clamp(0.0, 1.0)) / trials as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_check_is_bitwise() {
        assert!(BoundCheck::new("x", 1.0, 1.0, CheckKind::Exact).pass);
        assert!(!BoundCheck::new("x", 1.0 - 1e-12, 1.0, CheckKind::Exact).pass);
    }

    #[test]
    fn three_sigma_allowance() {
        let sigma = 0.01;
        assert!(BoundCheck::new("x", 0.52, 0.5, CheckKind::AtMostThreeSigma { sigma }).pass);
        assert!(!BoundCheck::new("x", 0.54, 0.5, CheckKind::AtMostThreeSigma { sigma }).pass);
    }
}
