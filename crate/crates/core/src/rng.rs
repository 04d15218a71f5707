//! Seeded, counter-based random streams.
//!
//! Every stochastic experiment draws from a ChaCha8 stream selected by
//! `(seed, stream)`. Streams are independent, so work can be split across
//! threads by stream index and reduced in index order without changing the
//! result.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream namespaces keep unrelated consumers of one seed apart. Each owns
/// the low 56 bits of the stream id.
pub mod namespace {
    pub const INSTANCES: u64 = 1 << 56;
    pub const MDS_BLOCKS: u64 = 2 << 56;
    pub const GAUSSIAN_BLOCKS: u64 = 3 << 56;
    pub const CALIBRATION: u64 = 4 << 56;
    pub const SOLVER: u64 = 5 << 56;
    pub const MONTE_CARLO: u64 = 6 << 56;
}

pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw on the half-open interval `(0, 1]`.
#[inline]
pub fn open_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    let bits = rng.next_u64() >> 11;
    (bits as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
}
