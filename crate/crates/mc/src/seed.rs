//! Counter-based derivation of independent RNG streams from one root seed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// SplitMix64 finalizer; a bijection on u64.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the seed of stream `index` from a root seed.
///
/// For a fixed root the map `index -> seed` is injective (an odd multiplier
/// followed by a bijective mixer), so distinct indices can never collide.
pub fn split_seed(root: u64, index: u64) -> u64 {
    mix(root ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(0x1))
}

/// A ChaCha12 RNG positioned on the derived stream.
pub fn stream_rng(root: u64, index: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(split_seed(root, index))
}

/// Labelled sub-streams of one trial, so the same trial can replay each of
/// its independent randomness sources (secrets, Born sampling, adversary
/// tape) separately.
#[derive(Debug, Clone, Copy)]
pub struct RngStream {
    root: u64,
    trial: u64,
}

impl RngStream {
    pub fn new(root: u64, trial: u64) -> RngStream {
        RngStream { root, trial }
    }

    pub fn labelled(&self, label: u64) -> ChaCha12Rng {
        let mut rng = stream_rng(self.root, self.trial);
        rng.set_stream(label);
        rng
    }

    /// Stream for drawing a trial's verifier secrets.
    pub fn secrets(&self) -> ChaCha12Rng {
        self.labelled(0)
    }

    /// Stream for Born-rule sampling (shared by replays of the same trial).
    pub fn born(&self) -> ChaCha12Rng {
        self.labelled(1)
    }

    /// Stream owned by adversary strategies.
    pub fn adversary(&self) -> ChaCha12Rng {
        self.labelled(2)
    }

    /// Stream for auxiliary draws (noise trajectories, subset selection).
    pub fn aux(&self) -> ChaCha12Rng {
        self.labelled(3)
    }
}
