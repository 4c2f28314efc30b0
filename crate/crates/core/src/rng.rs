//! Deterministic random substreams.
//!
//! Every randomized quantity in the crate is drawn from a ChaCha8 stream
//! selected by a `(seed, index)` pair, so trials and estimator repetitions can
//! run on any number of workers and still reproduce bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// The generator for substream `index` of `seed`.
pub fn substream(seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
