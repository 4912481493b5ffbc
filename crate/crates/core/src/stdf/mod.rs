//! Stable tail dependence functions `ℓ`, the extreme-value copulas they
//! induce, and the analytic transforms acting on them.

mod drift;
mod extremal;
mod levy;
mod margin3;
mod transforms;

pub use drift::{estimate_drift, extremal_coefficient};
pub use extremal::{pairwise_l2_identity, stdf_canonical, stdf_extremal, stdf_extremal_quadrature, STDF_QUAD_TOL};
pub use levy::LevySpec;
pub use margin3::{check_3margin_ciid, ThreeMargin};
pub use transforms::{InclusionExclusion, StableTransform, INCLUSION_EXCLUSION_MAX_DIM};

use crate::distributions::{CanonicalModel, UnitMeanCdf};
use crate::error::{Error, Result};
use crate::real::Real;

/// The non-zero prefix of an eventually-zero weight sequence `t`.
///
/// Trailing zeros are dropped on construction, so `len()` is the effective
/// dimension `d(t)`; interior zeros are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T> {
    entries: Vec<T>,
}

impl<T: Real> WeightVector<T> {
    pub fn new(mut entries: Vec<T>) -> Result<Self> {
        for &x in &entries {
            if !(x >= T::zero() && x.is_finite()) {
                return Err(Error::Domain(format!("weights must be finite and >= 0, got {x}")));
            }
        }
        let d = entries.iter().rposition(|&x| x > T::zero()).map_or(0, |i| i + 1);
        entries.truncate(d);
        Ok(Self { entries })
    }

    pub fn from_slice(entries: &[T]) -> Result<Self> {
        Self::new(entries.to_vec())
    }

    /// `(1, …, 1)` of length `n`.
    pub fn ones(n: usize) -> Self {
        Self {
            entries: vec![T::one(); n],
        }
    }

    pub fn zero() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// Effective dimension `d(t)`: index of the last positive entry.
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn positive(&self) -> impl Iterator<Item = T> + '_ {
        self.entries.iter().copied().filter(|&x| x > T::zero())
    }

    pub fn sum(&self) -> T {
        self.entries.iter().copied().sum()
    }

    pub fn max(&self) -> T {
        self.entries.iter().copied().fold(T::zero(), T::max)
    }

    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(self.entries.iter().map(|&x| x * factor).collect())
    }

    /// Distinct positive values with multiplicities, largest first.
    pub(crate) fn grouped(&self) -> Vec<(T, usize)> {
        let mut v: Vec<T> = self.positive().collect();
        v.sort_by(|a, b| b.as_f64().total_cmp(&a.as_f64()));
        let mut out: Vec<(T, usize)> = Vec::new();
        for x in v {
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }
}

/// A symmetric stable tail dependence function evaluator.
pub trait StableTailDependence<T: Real> {
    fn stdf(&self, t: &WeightVector<T>) -> Result<T>;

    /// Convenience wrapper validating a raw slice.
    fn stdf_at(&self, t: &[T]) -> Result<T> {
        self.stdf(&WeightVector::from_slice(t)?)
    }
}

impl<T: Real, E: StableTailDependence<T> + ?Sized> StableTailDependence<T> for &E {
    fn stdf(&self, t: &WeightVector<T>) -> Result<T> {
        (**self).stdf(t)
    }
}

impl<T: Real, E: StableTailDependence<T> + ?Sized> StableTailDependence<T> for Box<E> {
    fn stdf(&self, t: &WeightVector<T>) -> Result<T> {
        (**self).stdf(t)
    }
}

impl<T: Real> StableTailDependence<T> for CanonicalModel<T> {
    fn stdf(&self, t: &WeightVector<T>) -> Result<T> {
        stdf_canonical(self, t)
    }
}

impl<T: Real> StableTailDependence<T> for UnitMeanCdf<T> {
    fn stdf(&self, t: &WeightVector<T>) -> Result<T> {
        stdf_extremal(self, t)
    }
}

/// Adapter turning a closure into an evaluator.
#[derive(Debug, Clone, Copy)]
pub struct FnStdf<F>(pub F);

impl<T: Real, F: Fn(&WeightVector<T>) -> Result<T>> StableTailDependence<T> for FnStdf<F> {
    fn stdf(&self, t: &WeightVector<T>) -> Result<T> {
        (self.0)(t)
    }
}

/// `ℓ_Π(t) = Σ t_k`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Independence;

impl<T: Real> StableTailDependence<T> for Independence {
    fn stdf(&self, t: &WeightVector<T>) -> Result<T> {
        Ok(t.sum())
    }
}

/// `ℓ(t) = max t_k`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Comonotone;

impl<T: Real> StableTailDependence<T> for Comonotone {
    fn stdf(&self, t: &WeightVector<T>) -> Result<T> {
        Ok(t.max())
    }
}

/// `C_ℓ(u) = exp(−ℓ(−log u₁, …, −log u_d))` for `u ∈ (0, 1]^d`.
pub fn copula<T: Real, E: StableTailDependence<T> + ?Sized>(ell: &E, u: &[T]) -> Result<T> {
    let mut t = Vec::with_capacity(u.len());
    for &ui in u {
        if !(ui > T::zero() && ui <= T::one()) {
            return Err(Error::Domain(format!("copula arguments must lie in (0, 1], got {ui}")));
        }
        t.push((-ui.ln()).max(T::zero()));
    }
    Ok((-ell.stdf(&WeightVector::new(t)?)?).exp())
}
