use super::{StableTailDependence, WeightVector};
use crate::error::{Error, Result};
use crate::real::Real;

/// The three-variate symmetric stdf
/// `[λ₁ t_[1] + (λ₁ + λ₂) t_[2]] / (λ₁ + 2λ₂ + λ₃) + t_[3]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeMargin<T> {
    lambda: [T; 3],
}

impl<T: Real> ThreeMargin<T> {
    pub fn lambdas(&self) -> [T; 3] {
        self.lambda
    }

    /// Whether the function is the 3-margin of an exchangeable sequence: `λ₂² <= λ₁ λ₃`.
    pub fn is_conditionally_iid(&self) -> bool {
        let [l1, l2, l3] = self.lambda;
        l2 * l2 <= l1 * l3
    }
}

impl<T: Real> StableTailDependence<T> for ThreeMargin<T> {
    fn stdf(&self, t: &WeightVector<T>) -> Result<T> {
        if t.dim() > 3 {
            return Err(Error::Capacity { dim: t.dim(), limit: 3 });
        }
        let mut s = [T::zero(); 3];
        s[..t.dim()].copy_from_slice(t.entries());
        s.sort_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
        let [l1, l2, l3] = self.lambda;
        let denom = l1 + T::lit(2.0) * l2 + l3;
        Ok((l1 * s[0] + (l1 + l2) * s[1]) / denom + s[2])
    }
}

/// Checks `λ₂² <= λ₁ λ₃` and returns the evaluator regardless of the outcome.
pub fn check_3margin_ciid<T: Real>(lambda1: T, lambda2: T, lambda3: T) -> Result<(bool, ThreeMargin<T>)> {
    for (name, l) in [("lambda1", lambda1), ("lambda2", lambda2), ("lambda3", lambda3)] {
        if !(l > T::zero() && l.is_finite()) {
            return Err(Error::invalid(name, format!("must be positive and finite, got {l}")));
        }
    }
    let m = ThreeMargin {
        lambda: [lambda1, lambda2, lambda3],
    };
    Ok((m.is_conditionally_iid(), m))
}
