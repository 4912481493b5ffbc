use rand::Rng;

use crate::distributions::CanonicalModel;
use crate::error::{Error, Result};
use crate::real::Real;

/// Attempts allowed when the simplex normalizer `Σ W` comes out zero.
pub const MAX_PICKANDS_ATTEMPTS: u32 = 100;

/// A point of the unit simplex drawn from the Pickands dependence measure.
#[derive(Debug, Clone, PartialEq)]
pub struct PickandsSample<T> {
    pub coords: Vec<T>,
    /// Draws discarded because `Σ W = 0`.
    pub resamples: u32,
}

impl<T: Real> PickandsSample<T> {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `max_k t_k X_k`.
    pub fn weighted_max(&self, t: &[T]) -> T {
        self.coords.iter().zip(t).map(|(&x, &w)| x * w).fold(T::zero(), T::max)
    }
}

/// One draw of `X^{(d)}` with `ℓ^{(d)}(t) = d E[max_k t_k X_k]`.
///
/// Pick `D` uniform on `{1..d}`. With probability `b` return the vertex `e_D`;
/// otherwise draw `F` from `μ`, a size-biased `Z` from `F` at position `D` and
/// iid `Z_k ~ F` elsewhere, and normalize.
pub fn sample_pickands<T: Real, R: Rng + ?Sized>(
    model: &CanonicalModel<T>,
    d: usize,
    rng: &mut R,
) -> Result<PickandsSample<T>> {
    if d == 0 {
        return Err(Error::invalid("d", "must be at least 1"));
    }
    let b = model.b();
    for attempt in 0..MAX_PICKANDS_ATTEMPTS {
        let pos = rng.random_range(0..d);
        let vertex = match model.mu() {
            None => true,
            Some(_) if b >= T::one() => true,
            Some(_) if b <= T::zero() => false,
            Some(_) => rng.random::<f64>() < b.as_f64(),
        };
        if vertex {
            let mut coords = vec![T::zero(); d];
            coords[pos] = T::one();
            return Ok(PickandsSample {
                coords,
                resamples: attempt,
            });
        }
        let mu = model.mu().expect("checked above");
        let f = mu.cdf(mu.sample_index(rng));
        let mut w: Vec<T> = (0..d)
            .map(|k| if k == pos { T::zero() } else { f.sample(rng) })
            .collect();
        w[pos] = f.sample_size_biased(rng);
        let total: T = w.iter().copied().sum();
        if total > T::zero() && total.is_finite() {
            for x in &mut w {
                *x /= total;
            }
            return Ok(PickandsSample {
                coords: w,
                resamples: attempt,
            });
        }
    }
    Err(Error::Resource {
        context: "Pickands simplex draw with zero normalizer",
        budget: u64::from(MAX_PICKANDS_ATTEMPTS),
        achieved_bound: f64::NAN,
    })
}
