use super::{StableTailDependence, WeightVector};
use crate::distributions::{CanonicalModel, IdtTriplet, MixingMeasure, UnitMeanCdf};
use crate::error::{Error, Result};
use crate::real::Real;

/// A Lévy subordinator with drift `b_L` and a finite-atom Lévy measure
/// `ν_L = Σ_i β_i δ_{Θ_i}` (jumps `Θ_i ∈ (0, ∞]`).
#[derive(Debug, Clone, PartialEq)]
pub struct LevySpec<T> {
    drift: T,
    atoms: Vec<(T, T)>,
}

impl<T: Real> LevySpec<T> {
    /// `atoms` are `(jump, rate)` pairs; a jump of `+∞` is a killing atom.
    pub fn new(drift: T, atoms: Vec<(T, T)>) -> Result<Self> {
        if !(drift >= T::zero() && drift.is_finite()) {
            return Err(Error::invalid("b_L", format!("must be finite and >= 0, got {drift}")));
        }
        for &(jump, rate) in &atoms {
            if !(jump > T::zero()) {
                return Err(Error::invalid(
                    "atoms",
                    format!("jump sizes must be positive, got {jump}"),
                ));
            }
            if !(rate > T::zero() && rate.is_finite()) {
                return Err(Error::invalid(
                    "atoms",
                    format!("rates must be positive and finite, got {rate}"),
                ));
            }
        }
        if atoms.is_empty() && drift == T::zero() {
            return Err(Error::invalid("levy", "need a positive drift or at least one atom"));
        }
        Ok(Self { drift, atoms })
    }

    pub fn drift(&self) -> T {
        self.drift
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    /// Bernstein function `Ψ(x) = b_L x + Σ β_i (1 − e^{−x Θ_i})`.
    pub fn bernstein_psi(&self, x: T) -> T {
        if !(x > T::zero()) {
            return T::zero();
        }
        let jumps: T = self
            .atoms
            .iter()
            .map(|&(jump, rate)| {
                if jump.is_infinite() {
                    rate
                } else {
                    -rate * (-x * jump).exp_m1()
                }
            })
            .sum();
        self.drift * x + jumps
    }

    /// `Ψ(j) − Ψ(j − 1)` for integer `j >= 1`, free of cancellation.
    fn psi_increment(&self, j: usize) -> T {
        let jj = T::from_count(j - 1);
        let jumps: T = self
            .atoms
            .iter()
            .map(|&(jump, rate)| {
                if jump.is_infinite() {
                    if j == 1 {
                        rate
                    } else {
                        T::zero()
                    }
                } else {
                    rate * (-jj * jump).exp() * -(-jump).exp_m1()
                }
            })
            .sum();
        self.drift + jumps
    }

    /// `c = ∫ (1 − e^{−x}) ν_L(dx) = Ψ(1) − b_L`.
    pub fn jump_intensity(&self) -> T {
        self.bernstein_psi(T::one()) - self.drift
    }

    /// The strong-IDT triplet `(b_L, c, μ)` with `μ` the law of `TwoPoint(Θ)`,
    /// `Θ ~ (1 − e^{−x}) ν_L(dx) / c`.
    pub fn to_triplet(&self) -> Result<IdtTriplet<T>> {
        if self.atoms.is_empty() {
            return Err(Error::Domain("a pure-drift subordinator has no jump part".into()));
        }
        let components = self
            .atoms
            .iter()
            .map(|&(jump, rate)| {
                let cdf = if jump.is_infinite() {
                    UnitMeanCdf::Dirac1
                } else {
                    UnitMeanCdf::two_point(jump)?
                };
                let weight = if jump.is_infinite() {
                    rate
                } else {
                    -rate * (-jump).exp_m1()
                };
                Ok((weight, cdf))
            })
            .collect::<Result<Vec<_>>>()?;
        IdtTriplet::new(
            self.drift,
            self.jump_intensity(),
            MixingMeasure::normalized(components)?,
        )
    }

    /// The canonical pair, defined when `b_L + c = 1`.
    pub fn to_canonical(&self) -> Result<CanonicalModel<T>> {
        if self.atoms.is_empty() {
            if (self.drift - T::one()).abs() <= T::tol(1e-12) {
                return Ok(CanonicalModel::independence());
            }
            return Err(Error::Domain(format!("Ψ(1) = {} is not 1", self.drift)));
        }
        self.to_triplet()?.to_canonical()
    }
}

impl<T: Real> StableTailDependence<T> for LevySpec<T> {
    /// `ℓ(t) = Σ_k t_[k] (Ψ(d − k + 1) − Ψ(d − k))` over the ascending order
    /// statistics of the first `d(t)` entries.
    fn stdf(&self, t: &WeightVector<T>) -> Result<T> {
        let mut sorted = t.entries().to_vec();
        sorted.sort_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
        let d = sorted.len();
        Ok(sorted
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                if x > T::zero() {
                    x * self.psi_increment(d - k)
                } else {
                    T::zero()
                }
            })
            .sum())
    }
}
