//! Two-prover strategy models. The provers never communicate: each one
//! only ever touches its own half of the shared pair, which the
//! [`ProverView`] wrapper enforces structurally.

use crate::games::ChshGame;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use vbqc_qsim::{BlochVector, PureState};

/// A restricted handle on one prover's qubit of a shared block.
pub struct ProverView<'a> {
    state: &'a mut PureState,
    qubit: usize,
}

impl<'a> ProverView<'a> {
    pub fn new(state: &'a mut PureState, qubit: usize) -> ProverView<'a> {
        ProverView { state, qubit }
    }

    /// Projective measurement along `axis` on this prover's qubit only.
    pub fn measure(&mut self, axis: BlochVector, rng: &mut ChaCha12Rng) -> i8 {
        self.state
            .measure_bloch(self.qubit, axis, rng)
            .expect("in-range qubit")
    }
}

fn sign_to_bit(s: i8) -> u8 {
    u8::from(s < 0)
}

/// Joint behaviour of the two provers across CHSH rounds and tomography
/// blocks. Prover 1 holds qubit 0 of every shared pair, prover 2 qubit 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum PairStrategy {
    /// Measure exactly the instructed axes.
    Honest,
    /// Both provers reflect every measurement axis about the XY plane. The
    /// CHSH statistics are unchanged; steered computational-basis states
    /// come out flipped.
    Reflected,
    /// Deterministic local tables; the shared state is ignored.
    Classical { a_table: [u8; 2], b_table: [u8; 2] },
    /// Honest CHSH play, but prover 2's steering axis is rotated about Z by
    /// `eta` radians (deviates XY-plane steering).
    RotatedSteering { eta: f64 },
    /// Prover 2 announces a constant outcome without measuring.
    ConstantAnnouncer { o: u8 },
    /// Steering rotated per block by a pre-shared classical tape:
    /// `eta = eta_max * signal(block)`.
    TapeCorrelated { words: Vec<u64>, eta_max: f64 },
}

impl PairStrategy {
    pub fn descriptor(&self) -> String {
        match self {
            PairStrategy::Honest => "honest".into(),
            PairStrategy::Reflected => "reflected".into(),
            PairStrategy::Classical { a_table, b_table } => {
                format!("classical(a={a_table:?}, b={b_table:?})")
            }
            PairStrategy::RotatedSteering { eta } => format!("rotated-steering(eta={eta})"),
            PairStrategy::ConstantAnnouncer { o } => format!("constant-announcer(o={o})"),
            PairStrategy::TapeCorrelated { eta_max, .. } => {
                format!("tape-correlated(eta_max={eta_max})")
            }
        }
    }

    /// Prover 1's CHSH answer for question `x`.
    pub fn chsh_answer_a(
        &mut self,
        game: &ChshGame,
        x: usize,
        shared: &mut PureState,
        rng: &mut ChaCha12Rng,
    ) -> u8 {
        match self {
            PairStrategy::Classical { a_table, .. } => a_table[x],
            PairStrategy::Reflected => {
                let mut view = ProverView::new(shared, 0);
                sign_to_bit(view.measure(game.a_settings[x].reflect_xy(), rng))
            }
            _ => {
                let mut view = ProverView::new(shared, 0);
                sign_to_bit(view.measure(game.a_settings[x], rng))
            }
        }
    }

    /// Prover 2's CHSH answer for question `y`.
    pub fn chsh_answer_b(
        &mut self,
        game: &ChshGame,
        y: usize,
        shared: &mut PureState,
        rng: &mut ChaCha12Rng,
    ) -> u8 {
        match self {
            PairStrategy::Classical { b_table, .. } => b_table[y],
            PairStrategy::Reflected => {
                let mut view = ProverView::new(shared, 1);
                sign_to_bit(view.measure(game.b_settings[y].reflect_xy(), rng))
            }
            _ => {
                let mut view = ProverView::new(shared, 1);
                sign_to_bit(view.measure(game.b_settings[y], rng))
            }
        }
    }

    /// Prover 2 steers a tomography block toward `target` by measuring its
    /// half along the steering axis `(u_x, u_y, -u_z)` and announcing the
    /// outcome bit. An honest announcement `o` leaves prover 1's qubit at
    /// Bloch vector `(-1)^o · target`.
    pub fn steer(
        &mut self,
        target: BlochVector,
        block: usize,
        shared: &mut PureState,
        rng: &mut ChaCha12Rng,
    ) -> u8 {
        let steer_axis = BlochVector {
            x: target.x,
            y: target.y,
            z: -target.z,
        };
        match self {
            PairStrategy::ConstantAnnouncer { o } => *o,
            PairStrategy::Reflected => {
                let mut view = ProverView::new(shared, 1);
                sign_to_bit(view.measure(steer_axis.reflect_xy(), rng))
            }
            PairStrategy::RotatedSteering { eta } => {
                let mut view = ProverView::new(shared, 1);
                sign_to_bit(view.measure(steer_axis.rotated_about_z(*eta), rng))
            }
            PairStrategy::TapeCorrelated { words, eta_max } => {
                let tape = crate::strategy::tape_signal(words, block);
                let mut view = ProverView::new(shared, 1);
                sign_to_bit(view.measure(steer_axis.rotated_about_z(*eta_max * tape), rng))
            }
            _ => {
                let mut view = ProverView::new(shared, 1);
                sign_to_bit(view.measure(steer_axis, rng))
            }
        }
    }

    /// Prover 1 measures its tomography qubit along the instructed Pauli
    /// axis and reports the ±1 outcome.
    pub fn tomo_measure(
        &mut self,
        axis: BlochVector,
        shared: &mut PureState,
        rng: &mut ChaCha12Rng,
    ) -> i8 {
        match self {
            PairStrategy::Reflected => {
                let mut view = ProverView::new(shared, 0);
                view.measure(axis.reflect_xy(), rng)
            }
            _ => {
                let mut view = ProverView::new(shared, 0);
                view.measure(axis, rng)
            }
        }
    }
}

/// Deterministic tape value in [-1, 1] (shared with colluding FK provers).
pub fn tape_signal(words: &[u64], position: usize) -> f64 {
    if words.is_empty() {
        return 0.0;
    }
    let w = words[position % words.len()];
    (w as f64 / u64::MAX as f64) * 2.0 - 1.0
}
