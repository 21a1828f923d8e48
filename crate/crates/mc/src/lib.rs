//! Shared Monte Carlo machinery.
//!
//! Every experiment in the workspace draws its randomness from streams
//! derived here. There is no ambient randomness anywhere: a root seed plus
//! a stream index fully determine an RNG, so any report is reproducible
//! bit-for-bit and trials can be distributed across worker threads without
//! the schedule touching the numbers.

pub mod check;
pub mod seed;
pub mod stats;

pub use check::{BoundCheck, CheckKind};
pub use seed::{split_seed, stream_rng, RngStream};
pub use stats::{chi_square_pvalue, chi_square_statistic, wilson_ci, Wilson};

/// Keep large statevector buffers on the heap instead of per-allocation
/// mmap regions; the protocol loops allocate and free tens of megabytes per
/// trial and the page-fault churn otherwise dominates the runtime.
pub fn tune_allocator() {
    #[cfg(target_os = "linux")]
    unsafe {
        libc::mallopt(libc::M_MMAP_THRESHOLD, 128 << 20);
    }
}
