use rand::Rng;

use super::unit_mean::{Side, UnitMeanCdf};
use crate::error::{Error, Result};
use crate::real::Real;

/// Tolerance on the total mass of a mixing measure.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A finitely supported probability measure `μ` on unit-mean cdfs.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMeasure<T> {
    components: Vec<(T, UnitMeanCdf<T>)>,
    cumulative: Vec<T>,
}

impl<T: Real> MixingMeasure<T> {
    /// Weights must be positive and sum to one within [`WEIGHT_SUM_TOL`].
    pub fn new(components: Vec<(T, UnitMeanCdf<T>)>) -> Result<Self> {
        let total = Self::check_weights(&components)?;
        if (total - T::one()).abs() > T::tol(WEIGHT_SUM_TOL) {
            return Err(Error::invalid("weights", format!("must sum to 1, got {total}")));
        }
        Ok(Self::build(components))
    }

    /// Like [`MixingMeasure::new`] but divides the weights by their sum.
    pub fn normalized(mut components: Vec<(T, UnitMeanCdf<T>)>) -> Result<Self> {
        let total = Self::check_weights(&components)?;
        for c in &mut components {
            c.0 /= total;
        }
        Ok(Self::build(components))
    }

    /// The Dirac measure `δ_F`.
    pub fn single(cdf: UnitMeanCdf<T>) -> Self {
        Self::build(vec![(T::one(), cdf)])
    }

    fn check_weights(components: &[(T, UnitMeanCdf<T>)]) -> Result<T> {
        if components.is_empty() {
            return Err(Error::invalid("mu", "mixing measure needs at least one component"));
        }
        for (w, _) in components {
            if !(*w > T::zero() && w.is_finite()) {
                return Err(Error::invalid(
                    "weights",
                    format!("must be positive and finite, got {w}"),
                ));
            }
        }
        Ok(components.iter().map(|c| c.0).sum())
    }

    fn build(components: Vec<(T, UnitMeanCdf<T>)>) -> Self {
        let mut acc = T::zero();
        let mut cumulative: Vec<T> = components
            .iter()
            .map(|c| {
                acc += c.0;
                acc
            })
            .collect();
        if let Some(last) = cumulative.last_mut() {
            *last = T::one();
        }
        Self { components, cumulative }
    }

    pub fn components(&self) -> &[(T, UnitMeanCdf<T>)] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn cdf(&self, index: usize) -> &UnitMeanCdf<T> {
        &self.components[index].1
    }

    /// Categorical draw of a component index.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if self.components.len() == 1 {
            return 0;
        }
        let u = T::lit(rng.random::<f64>());
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.components.len() - 1)
    }

    /// `∫_a^∞ P(X > u) du` for `X` drawn from the mixture.
    pub fn tail_integral(&self, a: T) -> Result<T> {
        let mut total = T::zero();
        for (w, f) in &self.components {
            total += *w * f.tail_integral(a)?;
        }
        Ok(total)
    }

    /// Componentwise minimum of the component cdfs (one-sided as requested).
    pub fn envelope_cdf(&self, x: T, side: Side) -> T {
        self.components
            .iter()
            .map(|(_, f)| f.cdf_side(x, side))
            .fold(T::one(), T::min)
    }

    /// Largest `support_min` over the components.
    pub fn support_max_min(&self) -> T {
        self.components
            .iter()
            .map(|(_, f)| f.support_min())
            .fold(T::zero(), T::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_weights() {
        assert!(MixingMeasure::<f64>::new(vec![]).is_err());
        assert!(MixingMeasure::new(vec![(0.5, UnitMeanCdf::<f64>::Dirac1)]).is_err());
        assert!(MixingMeasure::new(vec![(1.5, UnitMeanCdf::Dirac1), (-0.5, UnitMeanCdf::UnitExponential)]).is_err());
        assert!(MixingMeasure::normalized(vec![(2.0, UnitMeanCdf::<f64>::Dirac1)]).is_ok());
    }

    #[test]
    fn categorical_frequencies() {
        let mu = MixingMeasure::new(vec![
            (0.2, UnitMeanCdf::<f64>::Dirac1),
            (0.8, UnitMeanCdf::UnitExponential),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let hits = (0..n).filter(|_| mu.sample_index(&mut rng) == 0).count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.2).abs() < 3.0 * (0.16f64 / n as f64).sqrt() + 1e-3, "{freq}");
    }
}
