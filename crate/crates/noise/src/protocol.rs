//! The sequential-repetition protocol at the idealized-code level.
//!
//! Each of `N` independent encodings is a single-trap line instance.
//! Honest devices suffer depolarizing preparation noise below the
//! correction threshold, which the (not-modelled) code removes, so honest
//! encodings run clean; adversarial deviations are not corrected and are
//! modelled directly at the logical level through the per-encoding
//! undetected-deviation probability, capped by the single-trap bound
//! `1 - 1/(cn)`.

use crate::schedule::ScheduleError;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use vbqc_fk::{run_fk, FkInstance, ProverStrategy, Verdict};
use vbqc_mc::RngStream;

#[derive(Debug, Error)]
pub enum NoiseError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("protocol error: {0}")]
    Fk(String),
}

/// Parameters of a repetition run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FtParams {
    /// Qubits per encoding.
    pub n: u64,
    /// The constant relating the encoded size to the single-trap bound.
    pub c: f64,
    /// Repetition strength; the deception target is `2^{-R}`.
    pub big_r: f64,
    /// Physical depolarizing strength on honest devices.
    pub p: f64,
    /// Number of encodings in the sequence.
    pub encodings: u64,
    /// Correction threshold of the idealized code.
    pub p_correct: f64,
}

impl FtParams {
    pub fn validated(self) -> Result<FtParams, NoiseError> {
        if self.c <= 2.0 {
            return Err(NoiseError::InvalidParams(format!("c = {} must exceed 2", self.c)));
        }
        if self.big_r <= 1.0 {
            return Err(NoiseError::InvalidParams(format!(
                "repetition strength R = {} must exceed 1",
                self.big_r
            )));
        }
        if self.encodings == 0 {
            return Err(NoiseError::InvalidParams("need at least one encoding".into()));
        }
        if !(0.0..1.0).contains(&self.p_correct) {
            return Err(NoiseError::InvalidParams(format!(
                "p_correct = {} outside [0, 1)",
                self.p_correct
            )));
        }
        if !(0.0..=self.p_correct).contains(&self.p) || self.p == self.p_correct && self.p != 0.0 {
            return Err(NoiseError::InvalidParams(format!(
                "p = {} must sit in [0, p_correct = {})",
                self.p, self.p_correct
            )));
        }
        if self.n < 2 {
            return Err(NoiseError::InvalidParams("encodings need at least 2 qubits".into()));
        }
        Ok(self)
    }

    /// The single-trap deception cap `1 - 1/(cn)` per encoding.
    pub fn per_encoding_cap(&self) -> f64 {
        1.0 - 1.0 / (self.c * self.n as f64)
    }
}

/// Prover behaviour across the sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum FtStrategy {
    /// Honest devices: preparation noise below threshold, corrected by the
    /// code; every encoding runs the clean protocol.
    Honest,
    /// Logical-level adversary that attempts to corrupt every encoding's
    /// output while passing its trap, succeeding independently per encoding
    /// with probability `success` (must respect the `1 - 1/(cn)` cap).
    LogicalDeception { success: f64 },
}

/// Outcome of one sequence run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FtRunOutcome {
    pub verdict: Verdict,
    /// Majority-vote logical output bit over the encodings.
    pub majority_output: u8,
    /// Accepted with a corrupted majority.
    pub deceived: bool,
    /// Per-encoding verdicts (true = traps passed).
    pub encoding_passed: Vec<bool>,
}

/// Run the repetition protocol once.
///
/// Honest path: each encoding is a deterministic-output line instance run
/// through the full interactive protocol. The sampled sub-threshold noise
/// is absorbed by the idealized code (a no-op by assumption), so the run is
/// clean and every honest encoding outputs logical 0.
pub fn run_ft_protocol(
    params: &FtParams,
    strategy: &FtStrategy,
    seed: u64,
) -> Result<FtRunOutcome, NoiseError> {
    let params = params.validated()?;
    match strategy {
        FtStrategy::Honest => {
            let mut passed = Vec::with_capacity(params.encodings as usize);
            let mut corrupted_votes = 0u64;
            for e in 0..params.encodings {
                let stream = RngStream::new(seed, e);
                let inst = FkInstance::line_deterministic(
                    params.n as usize,
                    seed,
                    &mut stream.secrets(),
                )
                .map_err(|err| NoiseError::Fk(err.to_string()))?;
                // sub-threshold preparation noise, corrected by the code:
                // sample the trajectory for fidelity to the model, discard it
                let mut aux = stream.aux();
                for _ in 0..inst.n_qubits() {
                    let _ = aux.random::<f64>() < params.p;
                }
                let t = run_fk(
                    &inst,
                    &ProverStrategy::Honest,
                    &mut stream.born(),
                    &mut stream.adversary(),
                    None,
                )
                .map_err(|err| NoiseError::Fk(err.to_string()))?;
                passed.push(t.verdict == Verdict::Accept);
                corrupted_votes += u64::from(t.output.iter().any(|&b| b != 0));
            }
            let all_passed = passed.iter().all(|&p| p);
            let majority_output = u8::from(corrupted_votes * 2 > params.encodings);
            Ok(FtRunOutcome {
                verdict: if all_passed { Verdict::Accept } else { Verdict::Reject },
                majority_output,
                deceived: all_passed && majority_output != 0,
                encoding_passed: passed,
            })
        }
        FtStrategy::LogicalDeception { success } => {
            let cap = params.per_encoding_cap();
            if !(0.0..=cap).contains(success) {
                return Err(NoiseError::InvalidParams(format!(
                    "per-encoding success {success} exceeds the cap {cap}"
                )));
            }
            let mut rng = RngStream::new(seed, 0).adversary();
            let passed: Vec<bool> = (0..params.encodings)
                .map(|_| rng.random::<f64>() < *success)
                .collect();
            let all_passed = passed.iter().all(|&p| p);
            // a corrupting adversary that survives all traps flips every
            // encoding's vote; otherwise some trap fails and the run rejects
            Ok(FtRunOutcome {
                verdict: if all_passed { Verdict::Accept } else { Verdict::Reject },
                majority_output: u8::from(all_passed),
                deceived: all_passed,
                encoding_passed: passed,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rayon::prelude::*;

    fn params(encodings: u64) -> FtParams {
        FtParams {
            n: 10,
            c: 3.0,
            big_r: 2.0,
            p: 0.005,
            encodings,
            p_correct: 0.01,
        }
    }

    #[test]
    fn honest_sequence_accepts_with_zero_output() {
        for seed in 0..20 {
            let out = run_ft_protocol(&params(5), &FtStrategy::Honest, seed).unwrap();
            assert_eq!(out.verdict, Verdict::Accept);
            assert_eq!(out.majority_output, 0);
            assert!(!out.deceived);
        }
    }

    #[test]
    fn single_encoding_reduces_to_one_run() {
        let out = run_ft_protocol(&params(1), &FtStrategy::Honest, 7).unwrap();
        assert_eq!(out.encoding_passed.len(), 1);
        assert_eq!(out.verdict, Verdict::Accept);
    }

    #[test]
    fn capped_adversary_deception_rate() {
        // at the cap, the deception rate is (1 - 1/(cn))^N = (29/30)^41
        let p = FtParams {
            encodings: 41,
            ..params(41)
        };
        let cap = p.per_encoding_cap();
        let trials = 100_000u64;
        let deceived: u64 = (0..trials)
            .into_par_iter()
            .map(|t| {
                let out = run_ft_protocol(
                    &p,
                    &FtStrategy::LogicalDeception { success: cap },
                    vbqc_mc::split_seed(910, t),
                )
                .unwrap();
                u64::from(out.deceived)
            })
            .sum();
        let freq = deceived as f64 / trials as f64;
        let expect = cap.powi(41);
        let sigma = (expect * (1.0 - expect) / trials as f64).sqrt();
        assert!(
            (freq - expect).abs() < 3.0 * sigma,
            "freq {freq}, expect {expect}"
        );
        // the bound itself
        assert!(expect < 0.25);
    }

    #[test]
    fn over_cap_adversary_rejected_by_validation() {
        let p = params(41);
        let e = run_ft_protocol(&p, &FtStrategy::LogicalDeception { success: 0.999 }, 1);
        assert!(e.is_err());
    }

    #[test]
    fn encodings_are_independent() {
        // adjacent-pair sample correlation of per-encoding verdicts under
        // the i.i.d. adversary stays within the sampling noise
        let p = params(8);
        let cap = 0.7;
        let trials = 400_000u64;
        let rows: Vec<Vec<bool>> = (0..trials)
            .into_par_iter()
            .map(|t| {
                run_ft_protocol(
                    &p,
                    &FtStrategy::LogicalDeception { success: cap },
                    vbqc_mc::split_seed(911, t),
                )
                .unwrap()
                .encoding_passed
            })
            .collect();
        for k in 0..7usize {
            let (mut sx, mut sy, mut sxy) = (0.0, 0.0, 0.0);
            for row in &rows {
                let x = f64::from(row[k]);
                let y = f64::from(row[k + 1]);
                sx += x;
                sy += y;
                sxy += x * y;
            }
            let n = trials as f64;
            let (mx, my) = (sx / n, sy / n);
            let cov = sxy / n - mx * my;
            let r = cov / ((mx * (1.0 - mx)).sqrt() * (my * (1.0 - my)).sqrt());
            assert!(r.abs() < 0.01, "pair {k}: correlation {r}");
        }
    }
}
