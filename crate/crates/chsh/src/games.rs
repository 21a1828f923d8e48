//! The six CHSH game types over the nine-vector measurement set, the
//! per-round machinery and the win-count referee.

use crate::strategy::PairStrategy;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use vbqc_qsim::{bell_state, BellKind, BlochVector};

/// Which plane a game certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GamePlane {
    XY,
    XZ,
    YZ,
}

/// One CHSH game: two measurement settings per side drawn from the
/// nine-vector set, plus the public answer-flip convention under which the
/// shared `|Ψ+⟩` state wins with probability `cos²(π/8)`.
///
/// The flips compensate the `-a_z b_z` sign of the `|Ψ+⟩` correlations:
/// answers from a pure-Z setting are inverted before scoring. They are a
/// public relabeling, so the classical maximum stays 3/4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshGame {
    pub id: usize,
    pub plane: GamePlane,
    pub a_settings: [BlochVector; 2],
    pub b_settings: [BlochVector; 2],
    pub a_flip: [bool; 2],
    pub b_flip: [bool; 2],
}

const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn v(x: f64, y: f64, z: f64) -> BlochVector {
    BlochVector::normalized(x, y, z)
}

/// The measurement set S: the three Pauli axes and the six diagonal
/// directions between pairs of axes.
pub fn measurement_set() -> [BlochVector; 9] {
    [
        v(1.0, 0.0, 0.0),
        v(0.0, 1.0, 0.0),
        v(0.0, 0.0, 1.0),
        v(R, R, 0.0),
        v(R, -R, 0.0),
        v(R, 0.0, R),
        v(R, 0.0, -R),
        v(0.0, R, R),
        v(0.0, R, -R),
    ]
}

fn is_pure_z(b: BlochVector) -> bool {
    b.x == 0.0 && b.y == 0.0
}

impl ChshGame {
    fn new(
        id: usize,
        plane: GamePlane,
        a_settings: [BlochVector; 2],
        b_settings: [BlochVector; 2],
    ) -> ChshGame {
        ChshGame {
            id,
            plane,
            a_settings,
            b_settings,
            a_flip: [is_pure_z(a_settings[0]), is_pure_z(a_settings[1])],
            b_flip: [is_pure_z(b_settings[0]), is_pure_z(b_settings[1])],
        }
    }

    /// The six games: for each plane, one game with the axis pair on side A
    /// and the diagonals on side B, and one with the sides swapped.
    pub fn all() -> [ChshGame; 6] {
        let x = v(1.0, 0.0, 0.0);
        let y = v(0.0, 1.0, 0.0);
        let z = v(0.0, 0.0, 1.0);
        let xy = [v(R, R, 0.0), v(R, -R, 0.0)];
        let xz = [v(R, 0.0, R), v(R, 0.0, -R)];
        let yz = [v(0.0, R, R), v(0.0, R, -R)];
        [
            ChshGame::new(1, GamePlane::XY, [x, y], xy),
            ChshGame::new(2, GamePlane::XY, xy, [x, y]),
            ChshGame::new(3, GamePlane::XZ, [x, z], xz),
            ChshGame::new(4, GamePlane::XZ, xz, [x, z]),
            ChshGame::new(5, GamePlane::YZ, [y, z], yz),
            ChshGame::new(6, GamePlane::YZ, yz, [y, z]),
        ]
    }

    /// Score a round: raw answer bits are flipped per the convention, then
    /// the round is won iff `a ⊕ b = x ∧ y`.
    pub fn wins(&self, x: usize, y: usize, a_raw: u8, b_raw: u8) -> bool {
        let a = a_raw ^ u8::from(self.a_flip[x]);
        let b = b_raw ^ u8::from(self.b_flip[y]);
        (a ^ b) == u8::from(x == 1 && y == 1)
    }
}

/// Quantum-ideal win rate, `cos²(π/8)`.
pub fn ideal_win_rate() -> f64 {
    let c = (std::f64::consts::PI / 8.0).cos();
    c * c
}

/// The exact best win rate over all 16 deterministic classical strategies
/// for one game (brute force; no sampling involved).
#[allow(clippy::needless_range_loop)]
pub fn classical_best_win_rate(game: &ChshGame) -> f64 {
    let mut best = 0.0f64;
    for table in 0u8..16 {
        let a = [table & 1, (table >> 1) & 1];
        let b = [(table >> 2) & 1, (table >> 3) & 1];
        let mut wins = 0;
        for x in 0..2 {
            for y in 0..2 {
                if game.wins(x, y, a[x], b[y]) {
                    wins += 1;
                }
            }
        }
        best = best.max(f64::from(wins) / 4.0);
    }
    best
}

/// Log line for one refereed round.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GameRound {
    pub round: u64,
    pub game_id: usize,
    pub x: usize,
    pub y: usize,
    pub a: u8,
    pub b: u8,
    pub win: bool,
}

/// Referee `rounds` sequential games of one type between the two provers of
/// `pair`, each round on a fresh shared `|Ψ+⟩`. Returns the win count and,
/// when `log` is set, the per-round records.
pub fn play_chsh(
    pair: &mut PairStrategy,
    game: &ChshGame,
    rounds: u64,
    rng: &mut ChaCha12Rng,
    log: bool,
) -> (u64, Vec<GameRound>) {
    let mut wins = 0;
    let mut records = Vec::with_capacity(if log { rounds as usize } else { 0 });
    for round in 0..rounds {
        let x = rng.random_range(0..2usize);
        let y = rng.random_range(0..2usize);
        let mut shared = bell_state(BellKind::PsiPlus);
        let a = pair.chsh_answer_a(game, x, &mut shared, rng);
        let b = pair.chsh_answer_b(game, y, &mut shared, rng);
        assert!(a <= 1 && b <= 1, "strategy answered outside {{0, 1}}: ({a}, {b})");
        let win = game.wins(x, y, a, b);
        wins += u64::from(win);
        if log {
            records.push(GameRound {
                round,
                game_id: game.id,
                x,
                y,
                a,
                b,
                win,
            });
        }
    }
    (wins, records)
}

/// Referee acceptance threshold for `m` games:
/// `cos²(π/8)·m - (1/(2√2))·√(m·log m)`. The log is natural by default;
/// `log2` flips the convention for sensitivity checks.
pub fn chsh_threshold(m: u64, log2: bool) -> f64 {
    let mf = m as f64;
    let logm = if log2 { mf.log2() } else { mf.ln() };
    ideal_win_rate() * mf - (1.0 / (2.0 * std::f64::consts::SQRT_2)) * (mf * logm.max(0.0)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RefereeVerdict {
    Accept,
    Reject,
}

/// Accept iff the provers won at least the threshold count out of
/// `big_n * n_g` games.
pub fn chsh_referee(total_wins: u64, big_n: u64, n_g: u64, log2: bool) -> RefereeVerdict {
    let m = big_n * n_g;
    if total_wins as f64 >= chsh_threshold(m, log2) {
        RefereeVerdict::Accept
    } else {
        RefereeVerdict::Reject
    }
}
