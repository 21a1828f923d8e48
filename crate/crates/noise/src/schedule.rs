//! How many encodings a repetition strength demands.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("cn must exceed 1 (c = {c}, n = {n})")]
    DegenerateProduct { c: f64, n: u64 },
    #[error("repetition strength must exceed 1, got {0}")]
    WeakRepetition(f64),
}

/// The encoding count `N = ⌈R / log2(cn/(cn-1))⌉`, the smallest integer
/// satisfying `(1 - 1/(cn))^N < 2^{-R}` (the log is base 2 because the
/// deception target is one half per unit of `R`).
pub fn repetition_schedule(n: u64, c: f64, big_r: f64) -> Result<u64, ScheduleError> {
    let cn = c * n as f64;
    if cn <= 1.0 {
        return Err(ScheduleError::DegenerateProduct { c, n });
    }
    if big_r <= 1.0 {
        return Err(ScheduleError::WeakRepetition(big_r));
    }
    let denom = (cn / (cn - 1.0)).log2();
    Ok((big_r / denom).ceil() as u64)
}

/// CSV table of schedules over a parameter grid, one row per (n, c, R)
/// triple with its encoding count and the deception consequence.
pub fn schedule_table(ns: &[u64], cs: &[f64], rs: &[f64]) -> Result<String, ScheduleError> {
    let mut out = String::from("n,c,R,N,holds\n");
    for &n in ns {
        for &c in cs {
            for &r in rs {
                let enc = repetition_schedule(n, c, r)?;
                out.push_str(&format!(
                    "{n},{c},{r},{enc},{}\n",
                    schedule_consequence_holds(n, c, r, enc)
                ));
            }
        }
    }
    Ok(out)
}

/// Whether `(1 - 1/(cn))^N < 2^{-R}` holds.
pub fn schedule_consequence_holds(n: u64, c: f64, big_r: f64, encodings: u64) -> bool {
    let cn = c * n as f64;
    let per = 1.0 - 1.0 / cn;
    encodings as f64 * per.ln() < -big_r * std::f64::consts::LN_2
}
