//! Counter-based random streams.
//!
//! Every consumer draws from a ChaCha8 keystream selected by
//! `(master seed, stream tag)` and positioned at `index · 2^32` words, so the
//! numbers a trial sees depend only on its coordinates, never on execution
//! order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Words reserved per trial; far more than any single trial consumes.
const WORDS_PER_TRIAL: u128 = 1 << 32;

pub type TrialRng = ChaCha8Rng;

/// Stable 64-bit tag for a named stream (FNV-1a).
pub fn stream_tag(name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Generator for trial `index` of stream `tag` under `seed`.
pub fn trial_rng(seed: u64, tag: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag);
    rng.set_word_pos(u128::from(index) * WORDS_PER_TRIAL);
    rng
}

pub fn named_trial_rng(seed: u64, name: &str, index: u64) -> TrialRng {
    trial_rng(seed, stream_tag(name), index)
}
