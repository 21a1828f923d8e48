//! CHSH games and steered state tomography for two non-communicating
//! provers sharing `|Ψ+⟩` pairs.
//!
//! The shared state is fixed to `|Ψ+⟩ = (|01⟩ + |10⟩)/√2`, whose
//! correlations are `E(a, b) = a_x b_x + a_y b_y - a_z b_z`. Rigidity of the
//! six-game battery is assumed rather than re-proved: strategies are
//! simulated at the quantum level, so what rigidity promises (and what the
//! one unfixable reflection ambiguity does) can be measured directly.

mod games;
mod params;
mod strategy;
mod tomography;

pub use games::{
    chsh_referee, chsh_threshold, classical_best_win_rate, ideal_win_rate, measurement_set,
    play_chsh, ChshGame, GamePlane, GameRound, RefereeVerdict,
};
pub use params::{
    composite_round_complexity_log10, ruv_round_complexity_log10, RuvParams, COMPOSITE_EXPONENT,
    RUV_EXPONENT,
};
pub use strategy::{PairStrategy, ProverView};
pub use tomography::{
    closeness_certificate, modified_tomography, tomography_accept, tomography_session,
    ClosenessCertificate, KeptBlock, ModifiedTomoOutcome, ModifiedTomoParams, Plane,
    TomographyAcceptance, TomographyConfig, TomographyStats,
};
