//! Monte Carlo estimators for completeness, robustness and soundness
//! behaviour. Every trial derives its own RNG streams from the root seed,
//! so trials are independent, replayable and order-insensitive.

use crate::deviate::{deviate_input, DeviationMode};
use crate::instance::{FkError, FkInstance};
use crate::runner::{run_fk, Verdict};
use crate::strategy::ProverStrategy;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vbqc_graph::TargetComputation;
use vbqc_mc::{wilson_ci, RngStream, Wilson};

/// Per-trial flags of one protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialFlags {
    pub accepted: bool,
    /// Output agreed with the honest common-random-numbers replay.
    pub correct: bool,
}

/// Result of a frequency-estimating experiment. The Wilson interval covers
/// the experiment's success event (accept-and-correct for completeness
/// estimates, accept-and-incorrect for soundness estimates).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateOutcome {
    pub wilson: Wilson,
    /// Per-trial records in trial order (for CSV dumps).
    pub trials: Vec<TrialFlags>,
}

impl EstimateOutcome {
    fn new(trials: Vec<TrialFlags>, success: impl Fn(&TrialFlags) -> bool) -> EstimateOutcome {
        let s = trials.iter().filter(|t| success(t)).count() as u64;
        EstimateOutcome {
            wilson: wilson_ci(s, trials.len() as u64, 0.95),
            trials,
        }
    }
}

/// Configuration of a robustness/completeness estimate on the
/// dotted-complete substrate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompletenessConfig {
    /// Computation size (the graph uses `3n` primaries).
    pub n: usize,
    /// Input deviation amplitude; 0 for the ideal-input experiment.
    pub eps: f64,
    pub mode: DeviationMode,
    pub trials: u64,
    pub seed: u64,
}

/// Estimate the accept-and-correct frequency of honest runs whose input is
/// deviated to trace distance `eps`. Correctness is judged against an
/// honest replay with the same secrets and the same Born stream (common
/// random numbers), which removes sampling variance from the indicator.
pub fn estimate_completeness(cfg: &CompletenessConfig) -> Result<EstimateOutcome, FkError> {
    let target = TargetComputation::wire(cfg.n);
    let flags: Result<Vec<TrialFlags>, FkError> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let stream = RngStream::new(cfg.seed, trial);
            let inst = FkInstance::dotted(cfg.n, &target, None, cfg.seed, &mut stream.secrets())?;

            let reference = run_fk(
                &inst,
                &ProverStrategy::Honest,
                &mut stream.born(),
                &mut stream.adversary(),
                None,
            )?;

            if cfg.eps == 0.0 {
                return Ok(TrialFlags {
                    accepted: reference.verdict == Verdict::Accept,
                    correct: true,
                });
            }
            let deviated = deviate_input(&inst, cfg.eps, cfg.mode, &mut stream.aux())?;
            let run = run_fk(
                &inst,
                &ProverStrategy::Honest,
                &mut stream.born(),
                &mut stream.adversary(),
                Some(&deviated),
            )?;
            Ok(TrialFlags {
                accepted: run.verdict == Verdict::Accept,
                correct: run.output == reference.output,
            })
        })
        .collect();
    Ok(EstimateOutcome::new(flags?, |t| t.accepted && t.correct))
}

/// Configuration of an accept-and-incorrect estimate on the single-trap
/// line substrate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PIncorrectConfig {
    /// Line-graph qubit count.
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
}

/// Estimate `p_incorrect`: the frequency, over fresh secrets per trial, of
/// runs where every trap passes yet the decoded output differs from the
/// honest replay under common random numbers.
pub fn estimate_p_incorrect(
    cfg: &PIncorrectConfig,
    strategy: &ProverStrategy,
) -> Result<EstimateOutcome, FkError> {
    let flags: Result<Vec<TrialFlags>, FkError> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let stream = RngStream::new(cfg.seed, trial);
            let inst = FkInstance::line(cfg.n, cfg.seed, &mut stream.secrets())?;
            let reference = run_fk(
                &inst,
                &ProverStrategy::Honest,
                &mut stream.born(),
                &mut stream.adversary(),
                None,
            )?;
            let run = run_fk(
                &inst,
                strategy,
                &mut stream.born(),
                &mut stream.adversary(),
                None,
            )?;
            Ok(TrialFlags {
                accepted: run.verdict == Verdict::Accept,
                correct: run.output == reference.output,
            })
        })
        .collect();
    Ok(EstimateOutcome::new(flags?, |t| t.accepted && !t.correct))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_input_completeness_is_one() {
        let cfg = CompletenessConfig {
            n: 1,
            eps: 0.0,
            mode: DeviationMode::LocalRotation,
            trials: 300,
            seed: 7,
        };
        let out = estimate_completeness(&cfg).unwrap();
        assert_eq!(out.wilson.frequency, 1.0);
    }

    #[test]
    fn deviated_completeness_clears_robustness_floor() {
        for mode in [DeviationMode::LocalRotation, DeviationMode::EnvCorrelated] {
            let cfg = CompletenessConfig {
                n: 1,
                eps: 0.1,
                mode,
                trials: 2000,
                seed: 11,
            };
            let out = estimate_completeness(&cfg).unwrap();
            assert!(
                out.wilson.lo >= 1.0 - 2.0 * cfg.eps,
                "mode {mode:?}: CI low {} under 1-2eps",
                out.wilson.lo
            );
        }
    }

    #[test]
    fn honest_strategy_never_incorrect() {
        let cfg = PIncorrectConfig {
            n: 4,
            trials: 500,
            seed: 13,
        };
        let out = estimate_p_incorrect(&cfg, &ProverStrategy::Honest).unwrap();
        assert_eq!(out.wilson.frequency, 0.0);
    }

    #[test]
    fn estimates_are_deterministic() {
        let cfg = PIncorrectConfig {
            n: 4,
            trials: 300,
            seed: 17,
        };
        let strat = ProverStrategy::FlipAll { prob: 0.5 };
        let a = estimate_p_incorrect(&cfg, &strat).unwrap();
        let b = estimate_p_incorrect(&cfg, &strat).unwrap();
        assert_eq!(a.trials, b.trials);
    }
}
