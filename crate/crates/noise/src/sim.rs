//! Trap-failure simulation under independent depolarizing flips.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vbqc_mc::RngStream;

/// Per-trap outcomes of one noisy run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrapRecord {
    /// `true` where the trap measurement failed.
    pub failed: Vec<bool>,
}

impl TrapRecord {
    /// Sample a record with each trap failing independently with
    /// probability `p`.
    pub fn sample(n_traps: u64, p: f64, rng: &mut impl Rng) -> TrapRecord {
        TrapRecord {
            failed: (0..n_traps).map(|_| rng.random::<f64>() < p).collect(),
        }
    }

    /// `F`, the failed-trap count.
    pub fn failures(&self) -> u64 {
        self.failed.iter().filter(|&&f| f).count() as u64
    }
}

/// Threshold acceptance: accept iff `F < N_T (p + ε)`. `F` is an integer,
/// so comparing `F + 1/2` against the threshold gives the exact real
/// comparison while absorbing last-ulp noise in `N_T (p + ε)`.
pub fn threshold_accept(record: &TrapRecord, p: f64, eps: f64) -> bool {
    let n = record.failed.len() as f64;
    (record.failures() as f64) + 0.5 <= n * (p + eps)
}

/// Frequency of all-traps-pass over independent noisy runs (the quantity
/// bounded by `(1 - p)^{N_T}`).
pub fn simulate_noisy_traps(n_traps: u64, p: f64, trials: u64, seed: u64) -> f64 {
    let passes: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = RngStream::new(seed, t).aux();
            u64::from(TrapRecord::sample(n_traps, p, &mut rng).failures() == 0)
        })
        .sum();
    passes as f64 / trials as f64
}

/// Frequency of threshold acceptance over independent noisy runs (the
/// quantity lower-bounded by `1 - exp(-2 ε² N_T)`).
pub fn simulate_threshold_acceptance(n_traps: u64, p: f64, eps: f64, trials: u64, seed: u64) -> f64 {
    let accepts: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = RngStream::new(seed, t).aux();
            u64::from(threshold_accept(&TrapRecord::sample(n_traps, p, &mut rng), p, eps))
        })
        .sum();
    accepts as f64 / trials as f64
}
