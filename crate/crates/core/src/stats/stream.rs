//! Seeded random streams.
//!
//! Every sampler in the crate draws from a [`RandomStream`]. A stream is a
//! ChaCha8 keystream keyed by a 64-bit seed and addressed by a 64-bit stream
//! id, so the sequence is fixed by `(seed, stream_id)` on every platform and
//! parallel workers obtain disjoint streams through [`RandomStream::substream`].

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Environment variable consulted for a default seed.
pub const SEED_ENV_VAR: &str = "EVTLAB_SEED";

#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
    seed: u64,
    stream_id: u64,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    pub fn substream(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RandomStream {
            rng,
            seed,
            stream_id,
        }
    }

    /// A fresh stream sharing this stream's seed with a different id.
    pub fn derive(&self, stream_id: u64) -> Self {
        Self::substream(self.seed, stream_id)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw on the open interval (0, 1).
    ///
    /// Uses the top 52 bits shifted by half a step, so the result is one of
    /// `(k + 1/2) 2^-52` and never touches either endpoint.
    pub fn uniform_open(&mut self) -> f64 {
        let bits = self.next_u64() >> 12;
        (bits as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }

    /// Standard exponential draw `-log(1 - U)`, strictly positive.
    pub fn standard_exponential(&mut self) -> f64 {
        -(-self.uniform_open()).ln_1p()
    }
}
