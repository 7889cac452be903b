//! Deterministic sample sets: a seeded ChaCha stream plus low-discrepancy
//! points. Every consumer derives its stream from `(seed, stream id)`, so
//! adding samples in one place never shifts the samples drawn elsewhere.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub const DEFAULT_SEED: u64 = 42;

/// Uniform `f64` source on `[0, 1)`.
#[derive(Clone, Debug)]
pub struct Stream {
    rng: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Stream { rng }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval `(-1, 1)`.
    pub fn symmetric(&mut self) -> f64 {
        loop {
            let v = 2.0 * self.unit() - 1.0;
            if v > -1.0 {
                return v;
            }
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn coin(&mut self) -> bool {
        self.rng.next_u32() & 1 == 1
    }
}

/// `i`-th element of the base-2 van der Corput sequence (`i >= 1`).
///
/// Prefixes of the sequence are nested, so a sample set built from the first
/// `n` terms is contained in the one built from the first `m >= n`.
pub fn van_der_corput(mut i: u64) -> f64 {
    let mut v = 0.0;
    let mut scale = 0.5;
    while i > 0 {
        if i & 1 == 1 {
            v += scale;
        }
        i >>= 1;
        scale *= 0.5;
    }
    v
}

/// `n` uniformly spaced points from `lo` to `hi` inclusive (`n >= 2`).
pub fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    let step = (hi - lo) / (n.max(2) - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + step * i as f64 })
}
