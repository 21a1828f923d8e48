//! Experiment configurations. A config fully determines an experiment: the
//! root seed is mandatory and there is no ambient randomness anywhere, so
//! equal configs produce equal reports.

use serde::{Deserialize, Serialize};
use thiserror::Error;
use vbqc_fk::DeviationMode;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("config does not validate: {0}")]
    Schema(String),
}

/// One experiment kind with its parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExperimentConfig {
    /// Honest completeness on the dotted-complete substrate.
    Fk {
        /// Computation size (3n primaries).
        n: usize,
        trials: u64,
        seed: u64,
    },
    /// Accept-and-correct frequency under a deviated input, against the
    /// `1 - 2ε` floor.
    Robustness {
        n: usize,
        eps: f64,
        mode: DeviationMode,
        trials: u64,
        seed: u64,
    },
    /// Game win rates, the classical ceiling, and referee behaviour.
    Chsh {
        /// Rounds per game type for the win-rate estimates.
        rounds_per_game: u64,
        /// Referee sessions per strategy at `session_games` games each.
        referee_sessions: u64,
        session_games: u64,
        seed: u64,
    },
    /// Steered-tomography acceptance and the prepared-closeness sweep.
    Tomography {
        blocks_per_target: usize,
        sessions: u64,
        /// Sample sizes for the closeness sweep.
        sweep_blocks: Vec<usize>,
        seed: u64,
    },
    /// End-to-end composite runs per strategy.
    Composite {
        fk_n: usize,
        blocks_per_target: usize,
        games_per_group: u64,
        trials: u64,
        d: u32,
        seed: u64,
    },
    /// Depolarizing-noise bounds and the repetition protocol.
    Ft {
        n: u64,
        c: f64,
        big_r: f64,
        p: f64,
        trials: u64,
        seed: u64,
    },
    /// Closed-form calculators (no sampling).
    Bounds { d: u32, n: f64, seed: u64 },
}

impl ExperimentConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentConfig::Fk { .. } => "fk",
            ExperimentConfig::Robustness { .. } => "robustness",
            ExperimentConfig::Chsh { .. } => "chsh",
            ExperimentConfig::Tomography { .. } => "tomography",
            ExperimentConfig::Composite { .. } => "composite",
            ExperimentConfig::Ft { .. } => "ft",
            ExperimentConfig::Bounds { .. } => "bounds",
        }
    }

    /// Defaults per kind; flags and config files override from here.
    pub fn default_for(kind: &str) -> Option<ExperimentConfig> {
        Some(match kind {
            "fk" => ExperimentConfig::Fk {
                n: 1,
                trials: 1000,
                seed: 1,
            },
            "robustness" => ExperimentConfig::Robustness {
                n: 1,
                eps: 0.05,
                mode: DeviationMode::LocalRotation,
                trials: 10_000,
                seed: 1,
            },
            "chsh" => ExperimentConfig::Chsh {
                rounds_per_game: 100_000,
                referee_sessions: 400,
                session_games: 10_000,
                seed: 1,
            },
            "tomography" => ExperimentConfig::Tomography {
                blocks_per_target: 10_000,
                sessions: 100,
                sweep_blocks: vec![1_000, 10_000, 100_000],
                seed: 1,
            },
            "composite" => ExperimentConfig::Composite {
                fk_n: 1,
                blocks_per_target: 1_200,
                games_per_group: 2_000,
                trials: 10,
                d: 25,
                seed: 1,
            },
            "ft" => ExperimentConfig::Ft {
                n: 10,
                c: 3.0,
                big_r: 2.0,
                p: 0.005,
                trials: 100_000,
                seed: 1,
            },
            "bounds" => ExperimentConfig::Bounds {
                d: 25,
                n: 2.0,
                seed: 1,
            },
            _ => return None,
        })
    }

    /// Basic sanity of numeric parameters, reported before any work starts.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError::Schema(msg));
        match self {
            ExperimentConfig::Fk { n, trials, .. } => {
                if *n == 0 || *n > 2 {
                    return fail(format!("fk n = {n} outside the desk-scale range 1..=2"));
                }
                if *trials == 0 {
                    return fail("trials must be positive".into());
                }
            }
            ExperimentConfig::Robustness { eps, trials, n, .. } => {
                if !(0.0..=1.0).contains(eps) {
                    return fail(format!("eps = {eps} outside [0, 1]"));
                }
                if *trials == 0 || *n == 0 || *n > 2 {
                    return fail("robustness needs trials >= 1 and n in 1..=2".into());
                }
            }
            ExperimentConfig::Chsh {
                rounds_per_game,
                referee_sessions,
                session_games,
                ..
            } => {
                if *rounds_per_game == 0 || *referee_sessions == 0 || *session_games == 0 {
                    return fail("chsh round/session counts must be positive".into());
                }
            }
            ExperimentConfig::Tomography {
                blocks_per_target,
                sessions,
                sweep_blocks,
                ..
            } => {
                if *blocks_per_target < 16 || *sessions == 0 {
                    return fail("tomography needs blocks_per_target >= 16, sessions >= 1".into());
                }
                if sweep_blocks.iter().any(|&b| b < 16) {
                    return fail("sweep blocks must be at least 16".into());
                }
            }
            ExperimentConfig::Composite {
                fk_n,
                blocks_per_target,
                trials,
                d,
                ..
            } => {
                if *fk_n == 0 || *fk_n > 2 || *blocks_per_target < 16 || *trials == 0 || *d == 0 {
                    return fail("composite parameters out of range".into());
                }
            }
            ExperimentConfig::Ft {
                n, c, big_r, p, trials, ..
            } => {
                if *n < 2 || *c <= 2.0 || *big_r <= 1.0 || !(0.0..1.0).contains(p) || *trials == 0 {
                    return fail("ft needs n >= 2, c > 2, R > 1, p in [0, 1), trials >= 1".into());
                }
            }
            ExperimentConfig::Bounds { d, n, .. } => {
                if *d == 0 || *n < 2.0 {
                    return fail("bounds needs d >= 1 and n >= 2".into());
                }
            }
        }
        Ok(())
    }

    /// Load from flags and an optional config file; on conflicting fields
    /// the file wins.
    pub fn resolve(
        kind: &str,
        file: Option<&std::path::Path>,
        seed: Option<u64>,
        trials: Option<u64>,
    ) -> Result<ExperimentConfig, ConfigError> {
        let base = ExperimentConfig::default_for(kind)
            .ok_or_else(|| ConfigError::Schema(format!("unknown experiment kind {kind:?}")))?;
        let mut value = serde_json::to_value(&base).expect("config serializes");
        if let Some(s) = seed {
            value["seed"] = serde_json::json!(s);
        }
        if let Some(t) = trials {
            if value.get("trials").is_some() {
                value["trials"] = serde_json::json!(t);
            } else if value.get("sessions").is_some() {
                value["sessions"] = serde_json::json!(t);
            } else if value.get("referee_sessions").is_some() {
                value["referee_sessions"] = serde_json::json!(t);
            }
        }
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)?;
            let overlay: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| ConfigError::Schema(format!("config file: {e}")))?;
            merge(&mut value, overlay);
        }
        let cfg: ExperimentConfig = serde_json::from_value(value)
            .map_err(|e| ConfigError::Schema(format!("merged config: {e}")))?;
        if cfg.kind() != kind {
            return Err(ConfigError::Schema(format!(
                "config file declares kind {:?} but the {kind:?} subcommand was invoked",
                cfg.kind()
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn merge(base: &mut serde_json::Value, overlay: serde_json::Value) {
    match (base, overlay) {
        (serde_json::Value::Object(b), serde_json::Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}
