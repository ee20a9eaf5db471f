//! Seeding conventions. All randomness flows through ChaCha8, a seedable
//! counter-based generator whose independent streams give every benchmark
//! replication its own reproducible RNG regardless of thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// RNG for a (master seed, stream) pair. Stream 0 is the "root" stream;
/// benchmark replication r uses stream r + 1.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a fresh sub-seed from an existing RNG.
pub fn child_seed<R: Rng>(rng: &mut R) -> u64 {
    rng.gen::<u64>()
}
