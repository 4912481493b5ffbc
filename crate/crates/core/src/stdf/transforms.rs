use super::{StableTailDependence, WeightVector};
use crate::error::{Error, Result};
use crate::real::Real;

/// Largest effective dimension accepted by [`InclusionExclusion`].
pub const INCLUSION_EXCLUSION_MAX_DIM: usize = 20;

/// `ℓ_α(t) = ℓ(t₁^{1/α}, t₂^{1/α}, …)^α`, the stdf after an independent
/// α-stable time change.
#[derive(Debug, Clone)]
pub struct StableTransform<E, T> {
    base: E,
    alpha: T,
}

impl<E, T: Real> StableTransform<E, T> {
    pub fn new(base: E, alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        Ok(Self { base, alpha })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }
}

impl<T: Real, E: StableTailDependence<T>> StableTailDependence<T> for StableTransform<E, T> {
    fn stdf(&self, t: &WeightVector<T>) -> Result<T> {
        let inv = T::one() / self.alpha;
        let powered = WeightVector::new(t.entries().iter().map(|&x| x.powf(inv)).collect())?;
        Ok(self.base.stdf(&powered)?.powf(self.alpha))
    }
}

/// `ℓ_Y(t) = Σ_{∅≠S} (−1)^{|S|+1} ℓ_X((1/t_i)_{i∈S})^{−1}` over subsets of the
/// positive entries of `t`.
#[derive(Debug, Clone)]
pub struct InclusionExclusion<E> {
    base: E,
}

impl<E> InclusionExclusion<E> {
    pub fn new(base: E) -> Self {
        Self { base }
    }
}

impl<T: Real, E: StableTailDependence<T>> StableTailDependence<T> for InclusionExclusion<E> {
    fn stdf(&self, t: &WeightVector<T>) -> Result<T> {
        let inv: Vec<T> = t.positive().map(|x| T::one() / x).collect();
        let d = inv.len();
        if d > INCLUSION_EXCLUSION_MAX_DIM {
            return Err(Error::Capacity {
                dim: d,
                limit: INCLUSION_EXCLUSION_MAX_DIM,
            });
        }
        let mut total = T::zero();
        let mut subset = Vec::with_capacity(d);
        for mask in 1u32..(1u32 << d) {
            subset.clear();
            subset.extend((0..d).filter(|&i| mask & (1 << i) != 0).map(|i| inv[i]));
            let term = T::one() / self.base.stdf(&WeightVector::new(subset.clone())?)?;
            if mask.count_ones() % 2 == 1 {
                total += term;
            } else {
                total -= term;
            }
        }
        Ok(total)
    }
}
