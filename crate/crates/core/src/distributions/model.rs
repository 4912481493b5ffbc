use super::mixing::MixingMeasure;
use super::unit_mean::UnitMeanCdf;
use crate::error::{Error, Result};
use crate::real::Real;

/// Tolerance for `b + c = 1` when a triplet is treated as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// The canonical pair `(b, μ)`: `ℓ = b ℓ_Π + (1 − b) ∫ ℓ_F μ(dF)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalModel<T> {
    b: T,
    mu: Option<MixingMeasure<T>>,
}

impl<T: Real> CanonicalModel<T> {
    /// `b ∈ [0, 1]`; `mu` may be omitted only when `b = 1`.
    pub fn new(b: T, mu: Option<MixingMeasure<T>>) -> Result<Self> {
        if !(b >= T::zero() && b <= T::one()) {
            return Err(Error::invalid("b", format!("must lie in [0, 1], got {b}")));
        }
        if b < T::one() && mu.is_none() {
            return Err(Error::invalid("mu", "required when b < 1"));
        }
        Ok(Self { b, mu })
    }

    /// `ℓ_Π`, iid unit exponentials.
    pub fn independence() -> Self {
        Self { b: T::one(), mu: None }
    }

    /// The extremal element `ℓ_F`.
    pub fn extremal(cdf: UnitMeanCdf<T>) -> Self {
        Self {
            b: T::zero(),
            mu: Some(MixingMeasure::single(cdf)),
        }
    }

    /// `b ℓ_Π + (1 − b) ℓ_F`.
    pub fn mixed(b: T, cdf: UnitMeanCdf<T>) -> Result<Self> {
        Self::new(b, Some(MixingMeasure::single(cdf)))
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn mu(&self) -> Option<&MixingMeasure<T>> {
        self.mu.as_ref()
    }

    /// The normalized strong-IDT triplet `(b, 1 − b, μ)`; `None` for `ℓ_Π`.
    pub fn to_triplet(&self) -> Option<IdtTriplet<T>> {
        if self.b >= T::one() {
            return None;
        }
        let mu = self.mu.clone()?;
        IdtTriplet::new(self.b, T::one() - self.b, mu).ok()
    }
}

/// Triplet `(b, c, μ)` of a non-decreasing strong-IDT process
/// `H_t = b t + Σ_k −log F^{(k)}((Γ_k / t)−)`, where `Γ_k` are the arrivals
/// of a Poisson process with rate `c` and `F^{(k)} ~ μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdtTriplet<T> {
    b: T,
    c: T,
    mu: MixingMeasure<T>,
}

impl<T: Real> IdtTriplet<T> {
    pub fn new(b: T, c: T, mu: MixingMeasure<T>) -> Result<Self> {
        if !(b >= T::zero() && b.is_finite()) {
            return Err(Error::invalid("b", format!("must be finite and >= 0, got {b}")));
        }
        if !(c > T::zero() && c.is_finite()) {
            return Err(Error::invalid("c", format!("must be positive and finite, got {c}")));
        }
        Ok(Self { b, c, mu })
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn mu(&self) -> &MixingMeasure<T> {
        &self.mu
    }

    /// `b + c = 1`, i.e. `E[Y₁] = 1` for the induced sequence.
    pub fn is_normalized(&self) -> bool {
        (self.b + self.c - T::one()).abs() <= T::tol(NORMALIZATION_TOL)
    }

    /// The canonical pair of a normalized triplet.
    pub fn to_canonical(&self) -> Result<CanonicalModel<T>> {
        if !self.is_normalized() {
            return Err(Error::Domain(format!(
                "triplet with b + c = {} does not describe a stable tail dependence function",
                self.b + self.c
            )));
        }
        CanonicalModel::new(self.b.min(T::one()), Some(self.mu.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(CanonicalModel::<f64>::new(1.0, None).is_ok());
        assert!(CanonicalModel::<f64>::new(0.5, None).is_err());
        assert!(CanonicalModel::<f64>::new(1.2, None).is_err());
        assert!(CanonicalModel::mixed(-0.1, UnitMeanCdf::<f64>::Dirac1).is_err());
        let mu = MixingMeasure::single(UnitMeanCdf::<f64>::Dirac1);
        assert!(IdtTriplet::new(0.0, 0.0, mu.clone()).is_err());
        assert!(IdtTriplet::new(-1.0, 1.0, mu.clone()).is_err());
        assert!(IdtTriplet::new(3.0, 2.0, mu).is_ok());
    }

    #[test]
    fn triplet_round_trip() {
        let m = CanonicalModel::mixed(0.25, UnitMeanCdf::<f64>::UnitExponential).unwrap();
        let t = m.to_triplet().unwrap();
        assert_eq!(t.c(), 0.75);
        assert!(t.is_normalized());
        assert_eq!(t.to_canonical().unwrap(), m);
        assert!(CanonicalModel::<f64>::independence().to_triplet().is_none());
        let unnormalized = IdtTriplet::new(1.0, 1.0, MixingMeasure::single(UnitMeanCdf::<f64>::Dirac1)).unwrap();
        assert!(unnormalized.to_canonical().is_err());
    }
}
