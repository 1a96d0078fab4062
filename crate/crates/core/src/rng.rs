//! Counter-based random number generation.
//!
//! Output `i` of a stream is a keyed bijective mix of the counter `i`, so a
//! stream can be split into independent substreams by index without sharing
//! state. Monte Carlo replicates use `substream(replicate_index)`, which makes
//! aggregate results independent of how replicates are scheduled on threads.

use rand_core::{impls, RngCore};
use rayon::prelude::*;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn mix64_alt(mut z: u64) -> u64 {
    z = (z ^ (z >> 32)).wrapping_mul(0xD6E8_FEB8_6659_FD93);
    z = (z ^ (z >> 32)).wrapping_mul(0xD6E8_FEB8_6659_FD93);
    z ^ (z >> 32)
}

/// Seedable counter-based generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngState {
    seed: u64,
    key: u64,
    counter: u64,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let key = mix64(seed ^ mix64_alt(stream.wrapping_add(1).wrapping_mul(GOLDEN)));
        RngState {
            seed,
            key,
            counter: 0,
        }
    }

    /// Independent stream number `index` derived from this generator's seed.
    pub fn substream(&self, index: u64) -> RngState {
        RngState::with_stream(self.seed ^ self.key.rotate_left(17), index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit words drawn so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }
}

impl RngCore for RngState {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        let x = self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN));
        mix64_alt(mix64(x) ^ self.key.rotate_right(29))
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        impls::fill_bytes_via_next(self, dst)
    }
}

/// Uniform variate on the open interval (0, 1).
#[inline]
pub fn open01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Runs `count` replicates in parallel, replicate `i` drawing from
/// `RngState::new(seed).substream(i)`. Output order follows the replicate
/// index.
pub fn replicate<T, F>(seed: u64, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut RngState) -> T + Sync + Send,
{
    let root = RngState::new(seed);
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = root.substream(i as u64);
            f(i, &mut rng)
        })
        .collect()
}

/// Same as [`replicate`] on a dedicated pool of `workers` threads.
pub fn replicate_with_workers<T, F>(seed: u64, count: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut RngState) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| replicate(seed, count, f))
}
