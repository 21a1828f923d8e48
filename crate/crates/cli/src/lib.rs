//! Batch experiment harness: configs in, reports with named bound checks
//! out. The binary (`vbqc`) adds argument parsing, worker-pool setup and
//! file output around [`run_experiment`].

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{ConfigError, ExperimentConfig};
pub use experiments::{run_experiment, run_experiment_with_rows, ExperimentError};
pub use report::{write_csv, ExperimentReport, SCHEMA_VERSION};

// the harness-owned statistics primitives, re-exported at the surface
pub use vbqc_mc::{split_seed, stream_rng, wilson_ci, Wilson};
