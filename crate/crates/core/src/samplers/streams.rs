//! Seeded sub-streams and a block-parallel driver whose output does not depend
//! on the number of workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Draws per independently seeded block.
pub const BLOCK_SIZE: usize = 4096;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for block `block` of the stream rooted at `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(mix(seed) ^ block.wrapping_mul(0xD6E8_FEB8_6659_FD93)))
}

/// Runs `job(rng, count)` over consecutive blocks covering `n` draws and
/// concatenates the results in block order.
///
/// Block `i` always sees `block_rng(seed, i)` and the same `count`, so the
/// output is identical for every `workers >= 1`.
pub fn run_blocks<R, F>(n: usize, seed: u64, workers: usize, job: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> Result<Vec<R>> + Sync,
{
    if workers == 0 {
        return Err(Error::invalid("workers", "must be at least 1"));
    }
    let blocks = n.div_ceil(BLOCK_SIZE);
    let one = |i: usize| {
        let count = BLOCK_SIZE.min(n - i * BLOCK_SIZE);
        job(&mut block_rng(seed, i as u64), count)
    };
    let parts: Vec<Result<Vec<R>>> = if workers == 1 || blocks <= 1 {
        (0..blocks).map(one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::invalid("workers", e.to_string()))?;
        pool.install(|| (0..blocks).into_par_iter().map(one).collect())
    };
    let mut out = Vec::with_capacity(n);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}
