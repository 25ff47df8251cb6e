//! Reproducible random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream for realization `index` under master `seed`: the ChaCha
/// key comes from the seed and the stream id is the index, so results do not
/// depend on the order in which realizations are scheduled.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub type StreamRng = ChaCha8Rng;
