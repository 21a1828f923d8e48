//! Sequential composition of the two protocols: the modified tomography
//! stage verifiably prepares single-qubit states on prover 1's side, and an
//! immediately following run of the single-server protocol consumes them as
//! its input. Robustness of the second stage is what makes the composition
//! sound: the prepared input is only ε-close to ideal, and its deviation
//! may be correlated (through a pre-agreed tape) with prover 1's behaviour
//! in the second stage.

mod bounds;
mod run;

pub use bounds::{composite_bounds, CompositeBounds};
pub use run::{
    run_composite, slot_demand, CompositeConfig, CompositeError, CompositeReport,
    CompositeStrategy,
};
