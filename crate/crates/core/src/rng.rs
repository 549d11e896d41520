//! Counter-based random substreams.
//!
//! A [`RandomStream`] is a node in a seed tree: `master_seed → sweep point →
//! replicate`. Draws for one shot come from
//! [`RandomStream::substream`]`(label, index)`, a ChaCha generator whose key
//! depends on the node and label and whose stream id is the measurement
//! index. Any worker can therefore regenerate any shot's draws without
//! coordination.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tag separating draws that must not perturb each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamLabel {
    Calibration,
    Measurement,
    Noise,
    Quantum,
    /// Signal-arm click decisions in quantum mode.
    SignalArm,
    /// Randomized decoding thresholds.
    Dividers,
}

impl StreamLabel {
    fn tag(self) -> u64 {
        match self {
            StreamLabel::Calibration => 0x6361_6c69_6272_6174,
            StreamLabel::Measurement => 0x6d65_6173_7572_656d,
            StreamLabel::Noise => 0x6e6f_6973_6500_0000,
            StreamLabel::Quantum => 0x7175_616e_7475_6d00,
            StreamLabel::SignalArm => 0x7369_676e_616c_0000,
            StreamLabel::Dividers => 0x6469_7669_6465_7273,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix(a: u64, b: u64) -> u64 {
    let mut s = a ^ b.rotate_left(32);
    splitmix64(&mut s) ^ splitmix64(&mut s).rotate_left(17)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomStream {
    master_seed: u64,
    key: u64,
}

impl RandomStream {
    pub fn new(master_seed: u64) -> Self {
        Self {
            master_seed,
            key: mix(master_seed, 0x7467_692d_7369_6d00),
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Derives the child node `index` (a sweep point, a replicate, ...).
    pub fn child(&self, index: u64) -> Self {
        Self {
            master_seed: self.master_seed,
            key: mix(self.key, index.wrapping_add(1)),
        }
    }

    /// Generator for `(label, index)` under this node.
    pub fn substream(&self, label: StreamLabel, index: u64) -> ChaCha8Rng {
        let mut state = mix(self.key, label.tag());
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(index);
        rng
    }
}
