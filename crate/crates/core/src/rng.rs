//! Reproducible random streams.
//!
//! Every random quantity in the crate comes from a ChaCha8 generator keyed by
//! a 64-bit master seed and a 64-bit stream id, so replication `r` of an
//! experiment always sees the same numbers regardless of which thread runs
//! it or in which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator identity recorded in run snapshots.
pub const RNG_IDENTITY: &str = "ChaCha8Rng/rand_chacha-0.9 seed_from_u64+set_stream";

pub type StreamRng = ChaCha8Rng;

/// Independent substream `stream` of master seed `seed`.
pub fn substream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
