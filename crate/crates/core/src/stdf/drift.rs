use super::{StableTailDependence, WeightVector};
use crate::error::{Error, Result};
use crate::real::Real;

/// Extremal coefficient `ℓ(1, …, 1)` in dimension `n`.
pub fn extremal_coefficient<T: Real, E: StableTailDependence<T> + ?Sized>(ell: &E, n: usize) -> Result<T> {
    ell.stdf(&WeightVector::ones(n))
}

/// Drift estimate `ℓ(1_{n+1}) − ℓ(1_n)` at `n = n_max`, clamped to `[0, 1]`.
///
/// The differences decrease to `b` as `n → ∞`; no extrapolation is attempted.
pub fn estimate_drift<T: Real, E: StableTailDependence<T> + ?Sized>(ell: &E, n_max: usize) -> Result<T> {
    if n_max < 2 {
        return Err(Error::invalid("n_max", format!("must be >= 2, got {n_max}")));
    }
    let diff = extremal_coefficient(ell, n_max + 1)? - extremal_coefficient(ell, n_max)?;
    Ok(diff.max(T::zero()).min(T::one()))
}
