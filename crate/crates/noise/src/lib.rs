//! Noise and fault tolerance at the idealized-code abstraction: closed-form
//! bounds on what depolarizing noise does to the plain protocol, the
//! trap-threshold repair and its soundness cost, and the sequential
//! repetition protocol whose deception probability halves per unit of the
//! repetition strength.

mod bounds;
mod protocol;
mod schedule;
mod sim;

pub use bounds::{
    hoeffding_completeness, noisy_completeness_bound, product_depolarized_distance,
    product_distance_bound, single_qubit_depolarized_distance, threshold_soundness_factor,
    ThresholdSoundness,
};
pub use protocol::{run_ft_protocol, FtParams, FtRunOutcome, FtStrategy, NoiseError};
pub use schedule::{repetition_schedule, schedule_consequence_holds, schedule_table, ScheduleError};
pub use sim::{
    simulate_noisy_traps, simulate_threshold_acceptance, threshold_accept, TrapRecord,
};
