//! Distribution functions of non-negative random variables with finite,
//! not necessarily unit, mean. These feed [`rescale_to_unit_mean`].
//!
//! [`rescale_to_unit_mean`]: super::rescale_to_unit_mean

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Open01};

use super::unit_mean::{Side, UnitMeanCdf};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::{gamma_p, gamma_q};

/// A finite-mean cdf descriptor `G`.
#[derive(Debug, Clone, PartialEq)]
pub enum FiniteMeanCdf<T> {
    /// Point mass at `at > 0`.
    Point { at: T },
    /// Exponential law with the given mean.
    Exponential { mean: T },
    /// Finitely many atoms `(value, probability)`, sorted by value.
    Discrete { atoms: Vec<(T, T)> },
    /// Uniform law on `[lo, hi]`, `0 <= lo < hi`.
    Uniform { lo: T, hi: T },
    /// Gamma law with shape `k` and scale `θ` (mean `kθ`).
    Gamma { shape: T, scale: T },
    /// `G(x) = F(x / factor)` for a unit-mean `F`.
    Scaled { base: Box<UnitMeanCdf<T>>, factor: T },
}

fn positive<T: Real>(name: &'static str, v: T) -> Result<T> {
    if v > T::zero() && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
    }
}

impl<T: Real> FiniteMeanCdf<T> {
    pub fn point(at: T) -> Result<Self> {
        Ok(Self::Point {
            at: positive("at", at)?,
        })
    }

    pub fn exponential(mean: T) -> Result<Self> {
        Ok(Self::Exponential {
            mean: positive("mean", mean)?,
        })
    }

    /// Atoms are sorted, equal values merged and probabilities normalized.
    pub fn discrete(atoms: Vec<(T, T)>) -> Result<Self> {
        let atoms = normalize_atoms(atoms)?;
        let mean: T = atoms.iter().map(|&(v, w)| v * w).sum();
        if !(mean > T::zero()) {
            return Err(Error::invalid("atoms", "mean must be positive"));
        }
        Ok(Self::Discrete { atoms })
    }

    pub fn uniform(lo: T, hi: T) -> Result<Self> {
        if !(lo >= T::zero() && hi > lo && hi.is_finite()) {
            return Err(Error::invalid(
                "uniform",
                format!("need 0 <= lo < hi < inf, got [{lo}, {hi}]"),
            ));
        }
        Ok(Self::Uniform { lo, hi })
    }

    pub fn gamma(shape: T, scale: T) -> Result<Self> {
        Ok(Self::Gamma {
            shape: positive("shape", shape)?,
            scale: positive("scale", scale)?,
        })
    }

    pub fn scaled(base: UnitMeanCdf<T>, factor: T) -> Result<Self> {
        Ok(Self::Scaled {
            base: Box::new(base),
            factor: positive("factor", factor)?,
        })
    }

    /// `M_G = ∫₀^∞ (1 − G(u)) du`.
    pub fn mean(&self) -> T {
        match self {
            Self::Point { at } => *at,
            Self::Exponential { mean } => *mean,
            Self::Discrete { atoms } => atoms.iter().map(|&(v, w)| v * w).sum(),
            Self::Uniform { lo, hi } => T::lit(0.5) * (*lo + *hi),
            Self::Gamma { shape, scale } => *shape * *scale,
            Self::Scaled { factor, .. } => *factor,
        }
    }

    pub fn cdf(&self, x: T) -> T {
        self.cdf_side(x, Side::Right)
    }

    pub fn cdf_side(&self, x: T, side: Side) -> T {
        if x.is_nan() {
            return T::nan();
        }
        if x < T::zero() {
            return T::zero();
        }
        if x == T::infinity() {
            return T::one();
        }
        match self {
            Self::Point { at } => step(x, *at, side),
            Self::Exponential { mean } => -(-x / *mean).exp_m1(),
            Self::Discrete { atoms } => atoms
                .iter()
                .filter(|&&(v, _)| match side {
                    Side::Right => v <= x,
                    Side::Left => v < x,
                })
                .map(|&(_, w)| w)
                .sum::<T>()
                .min(T::one()),
            Self::Uniform { lo, hi } => ((x - *lo) / (*hi - *lo)).max(T::zero()).min(T::one()),
            Self::Gamma { shape, scale } => gamma_p(*shape, x / *scale).unwrap_or_else(|_| T::nan()),
            Self::Scaled { base, factor } => base.cdf_side(x / *factor, side),
        }
    }

    /// `∫_a^∞ (1 − G(u)) du` for `a >= 0`.
    pub fn tail_integral(&self, a: T) -> Result<T> {
        let a = a.max(T::zero());
        if a == T::zero() {
            return Ok(self.mean());
        }
        if a.is_infinite() {
            return Ok(T::zero());
        }
        Ok(match self {
            Self::Point { at } => (*at - a).max(T::zero()),
            Self::Exponential { mean } => *mean * (-a / *mean).exp(),
            Self::Discrete { atoms } => atoms.iter().map(|&(v, w)| w * (v - a).max(T::zero())).sum(),
            Self::Uniform { lo, hi } => {
                if a <= *lo {
                    self.mean() - a
                } else if a >= *hi {
                    T::zero()
                } else {
                    (*hi - a) * (*hi - a) / (T::lit(2.0) * (*hi - *lo))
                }
            }
            Self::Gamma { shape, scale } => {
                let y = a / *scale;
                let v = *shape * *scale * gamma_q(*shape + T::one(), y)? - a * gamma_q(*shape, y)?;
                v.max(T::zero())
            }
            Self::Scaled { base, factor } => *factor * base.tail_integral(a / *factor)?,
        })
    }

    /// Generalized inverse `inf{x : G(x) >= p}`.
    pub fn quantile(&self, p: T) -> T {
        if p <= T::zero() {
            return T::zero();
        }
        match self {
            Self::Point { at } => *at,
            Self::Exponential { mean } => {
                if p >= T::one() {
                    T::infinity()
                } else {
                    -*mean * (-p).ln_1p()
                }
            }
            Self::Discrete { atoms } => discrete_quantile(atoms, p),
            Self::Uniform { lo, hi } => *lo + p.min(T::one()) * (*hi - *lo),
            Self::Gamma { .. } => {
                if p >= T::one() {
                    return T::infinity();
                }
                bisect_quantile(|x| self.cdf(x), p, self.mean())
            }
            Self::Scaled { base, factor } => *factor * base.quantile(p),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match self {
            Self::Gamma { shape, scale } => {
                let g = Gamma::new(shape.as_f64(), scale.as_f64()).expect("validated parameters");
                T::lit(g.sample(rng))
            }
            Self::Exponential { mean } => {
                let e: f64 = Exp1.sample(rng);
                *mean * T::lit(e)
            }
            Self::Scaled { base, factor } => *factor * base.sample(rng),
            _ => {
                let u: f64 = Open01.sample(rng);
                self.quantile(T::lit(u))
            }
        }
    }

    /// Draw from `t ↦ ∫₀^t s dG(s) / M_G`.
    pub fn sample_size_biased<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match self {
            Self::Point { at } => *at,
            Self::Exponential { mean } => {
                let g = Gamma::new(2.0, mean.as_f64()).expect("positive mean");
                T::lit(g.sample(rng))
            }
            Self::Discrete { atoms } => {
                let biased: Vec<(T, T)> = atoms.iter().map(|&(v, w)| (v, v * w)).collect();
                sample_weighted(&biased, rng)
            }
            Self::Uniform { lo, hi } => {
                let u: f64 = Open01.sample(rng);
                let (l2, h2) = (*lo * *lo, *hi * *hi);
                (l2 + T::lit(u) * (h2 - l2)).sqrt()
            }
            Self::Gamma { shape, scale } => {
                let g = Gamma::new(shape.as_f64() + 1.0, scale.as_f64()).expect("validated parameters");
                T::lit(g.sample(rng))
            }
            Self::Scaled { base, factor } => *factor * base.sample_size_biased(rng),
        }
    }

    /// Atoms when the law is purely atomic.
    pub fn atoms(&self) -> Option<Vec<(T, T)>> {
        match self {
            Self::Point { at } => Some(vec![(*at, T::one())]),
            Self::Discrete { atoms } => Some(atoms.clone()),
            Self::Scaled { base, factor } => base
                .atoms()
                .map(|a| a.into_iter().map(|(v, w)| (v * *factor, w)).collect()),
            _ => None,
        }
    }
}

fn step<T: Real>(x: T, at: T, side: Side) -> T {
    let hit = match side {
        Side::Right => x >= at,
        Side::Left => x > at,
    };
    if hit {
        T::one()
    } else {
        T::zero()
    }
}

/// Sort atoms by value, merge duplicates, drop nothing, normalize probabilities.
pub(crate) fn normalize_atoms<T: Real>(mut atoms: Vec<(T, T)>) -> Result<Vec<(T, T)>> {
    if atoms.is_empty() {
        return Err(Error::invalid("atoms", "at least one atom required"));
    }
    for &(v, w) in &atoms {
        if !(v >= T::zero() && v.is_finite()) {
            return Err(Error::invalid(
                "atoms",
                format!("atom value must be finite and >= 0, got {v}"),
            ));
        }
        if !(w > T::zero() && w.is_finite()) {
            return Err(Error::invalid(
                "atoms",
                format!("atom weight must be positive, got {w}"),
            ));
        }
    }
    atoms.sort_by(|a, b| a.0.as_f64().total_cmp(&b.0.as_f64()));
    let mut merged: Vec<(T, T)> = Vec::with_capacity(atoms.len());
    for (v, w) in atoms {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += w,
            _ => merged.push((v, w)),
        }
    }
    let total: T = merged.iter().map(|a| a.1).sum();
    for a in &mut merged {
        a.1 /= total;
    }
    Ok(merged)
}

pub(crate) fn discrete_quantile<T: Real>(atoms: &[(T, T)], p: T) -> T {
    let mut acc = T::zero();
    for &(v, w) in atoms {
        acc += w;
        if acc >= p {
            return v;
        }
    }
    atoms.last().map(|a| a.0).unwrap_or_else(T::zero)
}

pub(crate) fn sample_weighted<T: Real, R: Rng + ?Sized>(atoms: &[(T, T)], rng: &mut R) -> T {
    let total: T = atoms.iter().map(|a| a.1).sum();
    let u: f64 = Open01.sample(rng);
    discrete_quantile(atoms, T::lit(u) * total)
}

/// `inf{x : cdf(x) >= p}` for a continuous non-decreasing `cdf` by bracketing and bisection.
pub(crate) fn bisect_quantile<T: Real>(cdf: impl Fn(T) -> T, p: T, guess: T) -> T {
    let mut lo = T::zero();
    let mut hi = guess.max(T::min_positive_value());
    let mut doublings = 0;
    while cdf(hi) < p {
        lo = hi;
        hi *= T::lit(2.0);
        doublings += 1;
        if doublings > 2_000 || hi.is_infinite() {
            return T::infinity();
        }
    }
    for _ in 0..200 {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cdf(mid) >= p {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
