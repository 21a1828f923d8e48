//! The canonical experiment report: config echo, results, named bound
//! checks, and a wall-clock that is excluded from determinism comparisons.

use serde::{Deserialize, Serialize};
use vbqc_mc::BoundCheck;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub config: serde_json::Value,
    pub results: serde_json::Value,
    pub bound_checks: Vec<BoundCheck>,
    pub wall_clock_ms: u64,
}

impl ExperimentReport {
    pub fn new(
        experiment: &str,
        config: serde_json::Value,
        results: serde_json::Value,
        bound_checks: Vec<BoundCheck>,
    ) -> ExperimentReport {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            config,
            results,
            bound_checks,
            wall_clock_ms: 0,
        }
    }

    /// All bound checks passed.
    pub fn passed(&self) -> bool {
        self.bound_checks.iter().all(|c| c.pass)
    }

    /// The report without its wall clock, for bit-identical comparisons.
    pub fn deterministic_value(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("wall_clock_ms");
        v
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One human line per bound check.
    pub fn summary_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.bound_checks {
            out.push_str(&format!(
                "[{}] {}: observed {:.6}, reference {:.6}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.anchor,
                c.observed,
                c.reference
            ));
        }
        out
    }
}

/// Write per-trial rows as CSV with the given header.
pub fn write_csv(
    path: &std::path::Path,
    header: &[&str],
    rows: &[Vec<String>],
) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()
}
