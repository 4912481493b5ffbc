//! Samplers for min-stable exponential vectors, Pickands simplex points,
//! LePage paths and first-passage (conditionally iid) vectors, plus seeded
//! batch drivers.

mod ciid;
mod lepage;
mod minstable;
mod pickands;
pub mod streams;

pub use ciid::{sample_conditional_iid, sample_conditional_iid_model};
pub use lepage::{sample_idt_path, IdtPath, MAX_DOUBLINGS};
pub use minstable::{sample_minstable, MAX_ARRIVALS};
pub use pickands::{sample_pickands, PickandsSample, MAX_PICKANDS_ATTEMPTS};

use crate::distributions::CanonicalModel;
use crate::error::Result;
use crate::real::Real;

/// `n` draws of [`sample_minstable`] over seeded blocks.
pub fn sample_minstable_batch<T: Real>(
    model: &CanonicalModel<T>,
    d: usize,
    n: usize,
    seed: u64,
    tol: T,
    workers: usize,
) -> Result<Vec<Vec<T>>> {
    streams::run_blocks(n, seed, workers, |rng, count| {
        (0..count).map(|_| sample_minstable(model, d, rng, tol)).collect()
    })
}

/// `n` draws of [`sample_conditional_iid_model`] over seeded blocks.
pub fn sample_conditional_iid_batch<T: Real>(
    model: &CanonicalModel<T>,
    d: usize,
    n: usize,
    seed: u64,
    tol: T,
    workers: usize,
) -> Result<Vec<Vec<T>>> {
    streams::run_blocks(n, seed, workers, |rng, count| {
        (0..count)
            .map(|_| sample_conditional_iid_model(model, d, rng, tol))
            .collect()
    })
}

/// `n` draws of [`sample_pickands`] over seeded blocks.
pub fn sample_pickands_batch<T: Real>(
    model: &CanonicalModel<T>,
    d: usize,
    n: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<PickandsSample<T>>> {
    streams::run_blocks(n, seed, workers, |rng, count| {
        (0..count).map(|_| sample_pickands(model, d, rng)).collect()
    })
}

#[cfg(test)]
mod tests;
