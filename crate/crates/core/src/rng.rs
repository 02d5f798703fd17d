//! Counter-based derivation of independent random streams.
//!
//! Replica `r` of an experiment with master seed `s` draws from a ChaCha
//! stream keyed by `hash64(s, r)`. Streams never depend on execution order,
//! so replicas can run on any number of threads.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// The random stream type used throughout the crate.
pub type Stream = ChaCha12Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a master seed with a stream index.
#[inline]
pub fn hash64(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// Purpose tags keep the streams of different generators apart within a replica.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamTag {
    ConfigurationModel,
    HiddenVariable,
    Auxiliary(u64),
}

impl StreamTag {
    fn code(self) -> u64 {
        match self {
            StreamTag::ConfigurationModel => 0,
            StreamTag::HiddenVariable => 1,
            StreamTag::Auxiliary(k) => 2u64.wrapping_add(k),
        }
    }
}

fn key_from(word: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    let mut state = word;
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    key
}

/// Stream for replica `replica` of an experiment seeded with `master`.
pub fn replica_stream(master: u64, replica: u64) -> Stream {
    tagged_stream(master, replica, StreamTag::ConfigurationModel)
}

/// Stream for a specific generator within a replica.
pub fn tagged_stream(master: u64, replica: u64, tag: StreamTag) -> Stream {
    let word = hash64(hash64(master, replica), tag.code());
    Stream::from_seed(key_from(word))
}
