//! Unit-mean distribution functions: the extremal-boundary atoms `F`.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Open01};

use super::finite_mean::{discrete_quantile, normalize_atoms, sample_weighted, FiniteMeanCdf};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity, QuadOptions};
use crate::real::Real;
use crate::special::{gamma, gamma_p};

/// Which one-sided value of a cdf to evaluate at a jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `F(x)`, the right-continuous value.
    Right,
    /// `F(x−)`, the left limit.
    Left,
}

/// Unit-mean tolerance applied when constructing atomic families.
pub const UNIT_MEAN_TOL: f64 = 1e-9;

/// Absolute tolerance used by the quadrature fallbacks of this module.
pub const QUAD_TOL: f64 = 1e-11;

/// Probability level whose quantile separates the direct and mapped parts of
/// half-line integrals.
pub(crate) const SPLIT_LEVEL: f64 = 1.0 - 1e-6;

/// Fréchet law `F(x) = exp(−c_α x^{−1/α})`, `c_α = Γ(1−α)^{−1/α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frechet<T> {
    alpha: T,
    c: T,
}

impl<T: Real> Frechet<T> {
    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// The scale constant `c_α`.
    pub fn c(&self) -> T {
        self.c
    }
}

/// Mass `e^{−θ}` at zero and `1 − e^{−θ}` at `q = 1/(1 − e^{−θ})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPoint<T> {
    theta: T,
}

impl<T: Real> TwoPoint<T> {
    pub fn theta(&self) -> T {
        self.theta
    }

    /// Probability of the atom at zero.
    pub fn p0(&self) -> T {
        (-self.theta).exp()
    }

    /// Location of the positive atom.
    pub fn q(&self) -> T {
        T::one() / -(-self.theta).exp_m1()
    }
}

/// Finitely many atoms with unit mean, sorted by value.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrete<T> {
    atoms: Vec<(T, T)>,
    cumulative: Vec<T>,
}

impl<T: Real> Discrete<T> {
    fn from_normalized(atoms: Vec<(T, T)>) -> Self {
        let mut acc = T::zero();
        let mut cumulative: Vec<T> = atoms
            .iter()
            .map(|a| {
                acc += a.1;
                acc
            })
            .collect();
        if let Some(last) = cumulative.last_mut() {
            *last = T::one();
        }
        Self { atoms, cumulative }
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    fn cdf_side(&self, x: T, side: Side) -> T {
        let idx = match side {
            Side::Right => self.atoms.partition_point(|a| a.0 <= x),
            Side::Left => self.atoms.partition_point(|a| a.0 < x),
        };
        if idx == 0 {
            T::zero()
        } else {
            self.cumulative[idx - 1]
        }
    }
}

/// The umbrella-family member `F_z(x) = F(x Ψ_F(z))^z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tilted<T> {
    base: Box<UnitMeanCdf<T>>,
    z: T,
    psi: T,
}

impl<T: Real> Tilted<T> {
    pub fn base(&self) -> &UnitMeanCdf<T> {
        &self.base
    }

    pub fn z(&self) -> T {
        self.z
    }

    /// `Ψ_F(z)` of the base cdf.
    pub fn psi(&self) -> T {
        self.psi
    }
}

/// `F(t) = G(M_G t)` for a finite-mean `G` with mean `M_G`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rescaled<T> {
    base: FiniteMeanCdf<T>,
    mean: T,
}

impl<T: Real> Rescaled<T> {
    pub fn base(&self) -> &FiniteMeanCdf<T> {
        &self.base
    }

    pub fn base_mean(&self) -> T {
        self.mean
    }
}

/// Distribution function of a non-negative random variable with unit mean.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitMeanCdf<T> {
    /// Point mass at one (comonotone atom).
    Dirac1,
    Frechet(Frechet<T>),
    TwoPoint(TwoPoint<T>),
    /// `F(x) = 1 − e^{−x}`.
    UnitExponential,
    Discrete(Discrete<T>),
    Tilted(Tilted<T>),
    Rescaled(Rescaled<T>),
}

impl<T: Real> UnitMeanCdf<T> {
    pub fn dirac1() -> Self {
        Self::Dirac1
    }

    pub fn unit_exponential() -> Self {
        Self::UnitExponential
    }

    pub fn frechet(alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        let c = gamma(T::one() - alpha).powf(-T::one() / alpha);
        Ok(Self::Frechet(Frechet { alpha, c }))
    }

    pub fn two_point(theta: T) -> Result<Self> {
        if !(theta > T::zero() && theta.is_finite()) {
            return Err(Error::invalid(
                "theta",
                format!("must be positive and finite, got {theta}"),
            ));
        }
        Ok(Self::TwoPoint(TwoPoint { theta }))
    }

    /// Atoms `(value, weight)`; weights are normalized, the mean must already be one.
    pub fn discrete(atoms: Vec<(T, T)>) -> Result<Self> {
        let atoms = normalize_atoms(atoms)?;
        let mean: T = atoms.iter().map(|&(v, w)| v * w).sum();
        if (mean - T::one()).abs() > T::tol(UNIT_MEAN_TOL) {
            return Err(Error::invalid(
                "atoms",
                format!("discrete law must have unit mean, got {mean}; use a rescaled family instead"),
            ));
        }
        Ok(Self::Discrete(Discrete::from_normalized(atoms)))
    }

    /// Short family name as used in model-spec documents.
    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Dirac1 => "dirac1",
            Self::Frechet(_) => "frechet",
            Self::TwoPoint(_) => "two_point",
            Self::UnitExponential => "unit_exponential",
            Self::Discrete(_) => "discrete",
            Self::Tilted(_) => "tilted",
            Self::Rescaled(_) => "rescaled",
        }
    }

    pub fn cdf(&self, x: T) -> T {
        self.cdf_side(x, Side::Right)
    }

    /// Left limit `F(x−)`.
    pub fn cdf_left(&self, x: T) -> T {
        self.cdf_side(x, Side::Left)
    }

    pub fn cdf_side(&self, x: T, side: Side) -> T {
        if x.is_nan() {
            return T::nan();
        }
        if x == T::infinity() {
            return T::one();
        }
        if x < T::zero() || (x == T::zero() && side == Side::Left) {
            return T::zero();
        }
        match self {
            Self::Dirac1 => {
                let hit = match side {
                    Side::Right => x >= T::one(),
                    Side::Left => x > T::one(),
                };
                if hit {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Self::Frechet(_) | Self::UnitExponential | Self::Tilted(_) => self.ln_cdf_side(x, side).exp(),
            Self::TwoPoint(tp) => {
                let q = tp.q();
                let hit = match side {
                    Side::Right => x >= q,
                    Side::Left => x > q,
                };
                if hit {
                    T::one()
                } else {
                    tp.p0()
                }
            }
            Self::Discrete(d) => d.cdf_side(x, side),
            Self::Rescaled(r) => r.base.cdf_side(x * r.mean, side),
        }
    }

    /// `ln F(x)` (or `ln F(x−)`), accurate where `F` is close to one.
    pub fn ln_cdf_side(&self, x: T, side: Side) -> T {
        if x == T::infinity() {
            return T::zero();
        }
        if x < T::zero() || (x == T::zero() && side == Side::Left) {
            return T::neg_infinity();
        }
        match self {
            Self::Frechet(f) => {
                if x == T::zero() {
                    T::neg_infinity()
                } else {
                    -f.c * x.powf(-T::one() / f.alpha)
                }
            }
            Self::UnitExponential => (-(-x).exp()).ln_1p(),
            Self::Tilted(t) => t.z * t.base.ln_cdf_side(x * t.psi, side),
            _ => self.cdf_side(x, side).ln(),
        }
    }

    pub fn ln_cdf(&self, x: T) -> T {
        self.ln_cdf_side(x, Side::Right)
    }

    /// `1 − F(x)` without cancellation in the upper tail.
    pub fn survival(&self, x: T) -> T {
        match self {
            Self::Frechet(_) | Self::UnitExponential | Self::Tilted(_) => -self.ln_cdf(x).exp_m1(),
            _ => T::one() - self.cdf(x),
        }
    }

    /// Generalized inverse `inf{x >= 0 : F(x) >= p}`.
    pub fn quantile(&self, p: T) -> T {
        if p <= T::zero() {
            return T::zero();
        }
        match self {
            Self::Dirac1 => T::one(),
            Self::Frechet(f) => {
                if p >= T::one() {
                    T::infinity()
                } else {
                    (f.c / -p.ln()).powf(f.alpha)
                }
            }
            Self::TwoPoint(tp) => {
                if p <= tp.p0() {
                    T::zero()
                } else {
                    tp.q()
                }
            }
            Self::UnitExponential => {
                if p >= T::one() {
                    T::infinity()
                } else {
                    -(-p).ln_1p()
                }
            }
            Self::Discrete(d) => discrete_quantile(&d.atoms, p),
            Self::Tilted(t) => t.base.quantile(p.powf(T::one() / t.z)) / t.psi,
            Self::Rescaled(r) => r.base.quantile(p) / r.mean,
        }
    }

    /// `inf{x >= 0 : 1 − F(x) <= s}`, computed from the upper tail where possible.
    pub fn upper_quantile(&self, s: T) -> T {
        if s >= T::one() {
            return T::zero();
        }
        match self {
            Self::Frechet(f) => {
                if s <= T::zero() {
                    T::infinity()
                } else {
                    (f.c / -(-s).ln_1p()).powf(f.alpha)
                }
            }
            Self::UnitExponential => -s.ln(),
            Self::Tilted(t) => {
                // F(x ψ)^z = 1 − s  ⇔  1 − F(x ψ) = 1 − (1 − s)^{1/z}
                let base_tail = -((-s).ln_1p() / t.z).exp_m1();
                t.base.upper_quantile(base_tail) / t.psi
            }
            _ => self.quantile(T::one() - s),
        }
    }

    /// A draw from `F` conditioned on exceeding `a`; requires `F(a) < 1`.
    pub fn sample_above<R: Rng + ?Sized>(&self, a: T, rng: &mut R) -> T {
        match self.atoms() {
            Some(atoms) => {
                let above: Vec<(T, T)> = atoms.into_iter().filter(|&(v, _)| v > a).collect();
                sample_weighted(&above, rng)
            }
            None => {
                let u: f64 = Open01.sample(rng);
                self.upper_quantile(self.survival(a) * T::lit(u))
            }
        }
    }

    /// `inf{x : F(x) > 0}`; `F(u−) = 0` exactly for `u <= support_min`.
    pub fn support_min(&self) -> T {
        match self {
            Self::Dirac1 => T::one(),
            Self::Discrete(d) => d.atoms[0].0,
            Self::Tilted(t) => t.base.support_min() / t.psi,
            Self::Rescaled(r) => {
                let lo = match &r.base {
                    FiniteMeanCdf::Point { at } => *at,
                    FiniteMeanCdf::Discrete { atoms } => atoms[0].0,
                    FiniteMeanCdf::Uniform { lo, .. } => *lo,
                    FiniteMeanCdf::Scaled { base, factor } => base.support_min() * *factor,
                    FiniteMeanCdf::Exponential { .. } | FiniteMeanCdf::Gamma { .. } => T::zero(),
                };
                lo / r.mean
            }
            Self::Frechet(_) | Self::TwoPoint(_) | Self::UnitExponential => T::zero(),
        }
    }

    /// `(value, probability)` pairs when the law is purely atomic.
    pub fn atoms(&self) -> Option<Vec<(T, T)>> {
        match self {
            Self::Dirac1 => Some(vec![(T::one(), T::one())]),
            Self::TwoPoint(tp) => {
                let p0 = tp.p0();
                Some(vec![(T::zero(), p0), (tp.q(), T::one() - p0)])
            }
            Self::Discrete(d) => Some(d.atoms.clone()),
            Self::Rescaled(r) => r
                .base
                .atoms()
                .map(|a| a.into_iter().map(|(v, w)| (v / r.mean, w)).collect()),
            Self::Frechet(_) | Self::UnitExponential | Self::Tilted(_) => None,
        }
    }

    /// A point above which at most `1 − SPLIT_LEVEL` of the mass remains.
    pub(crate) fn split_point(&self) -> T {
        let q = self.quantile(T::lit(SPLIT_LEVEL));
        if q.is_finite() && q > T::zero() {
            q
        } else {
            T::one()
        }
    }

    /// `∫_a^∞ (1 − F(u)) du`; closed form per family where one exists.
    pub fn tail_integral(&self, a: T) -> Result<T> {
        let a = a.max(T::zero());
        if a.is_infinite() {
            return Ok(T::zero());
        }
        match self {
            Self::Dirac1 => Ok((T::one() - a).max(T::zero())),
            Self::Frechet(f) => {
                if a == T::zero() {
                    return Ok(T::one());
                }
                // E[X 1{X > a}] − a P(X > a) with X = (c/E)^α, E ~ Exp(1)
                let y = f.c * a.powf(-T::one() / f.alpha);
                let head = gamma_p(T::one() - f.alpha, y)?;
                Ok((head - a * self.survival(a)).max(T::zero()))
            }
            Self::TwoPoint(tp) => Ok((T::one() - tp.p0()) * (tp.q() - a).max(T::zero())),
            Self::UnitExponential => Ok((-a).exp()),
            Self::Discrete(d) => Ok(d.atoms.iter().map(|&(v, w)| w * (v - a).max(T::zero())).sum()),
            Self::Tilted(_) => self.tail_integral_quadrature(a),
            Self::Rescaled(r) => Ok(r.base.tail_integral(a * r.mean)? / r.mean),
        }
    }

    /// `∫_a^∞ (1 − F(u)) du` by adaptive quadrature, ignoring closed forms.
    pub fn tail_integral_quadrature(&self, a: T) -> Result<T> {
        let a = a.max(T::zero());
        let split = self.split_point().max(a).max(T::min_positive_value().sqrt());
        integrate_to_infinity(|u| self.survival(u), a, split, QuadOptions::with_tol(QUAD_TOL)).map(|q| q.value)
    }

    /// `∫₀^∞ g(F(t)) dt` for a step-function `F` with the given atoms; requires `g(1) = 0`.
    pub(crate) fn atomic_integral(atoms: &[(T, T)], g: impl Fn(T) -> T) -> T {
        let mut total = atoms[0].0 * g(T::zero());
        let mut acc = T::zero();
        for pair in atoms.windows(2) {
            acc += pair[0].1;
            total += (pair[1].0 - pair[0].0) * g(acc.min(T::one()));
        }
        total
    }

    /// `Ψ_F(z) = ∫₀^∞ (1 − F(t)^z) dt`.
    pub fn psi(&self, z: T) -> Result<T> {
        if !(z > T::zero() && z.is_finite()) {
            return Err(Error::invalid("z", format!("must be positive and finite, got {z}")));
        }
        if z == T::one() {
            return Ok(T::one());
        }
        match self {
            Self::Dirac1 => Ok(T::one()),
            Self::Frechet(f) => Ok(z.powf(f.alpha)),
            _ => {
                if let Some(atoms) = self.atoms() {
                    return Ok(Self::atomic_integral(&atoms, |p| T::one() - p.powf(z)));
                }
                let split = self.split_point();
                integrate_to_infinity(
                    |t| -(z * self.ln_cdf(t)).exp_m1(),
                    T::zero(),
                    split,
                    QuadOptions::with_tol(QUAD_TOL),
                )
                .map(|q| q.value)
            }
        }
    }

    /// The umbrella-family member `F_z(x) = F(x Ψ_F(z))^z`, again of unit mean.
    pub fn tilt(&self, z: T) -> Result<Self> {
        if !(z > T::zero() && z.is_finite()) {
            return Err(Error::invalid("z", format!("must be positive and finite, got {z}")));
        }
        if z == T::one() {
            return Ok(self.clone());
        }
        match self {
            Self::Dirac1 | Self::Frechet(_) => Ok(self.clone()),
            Self::TwoPoint(tp) => Self::two_point(tp.theta * z),
            // F_{z1} tilted by z2 is F tilted by z1·z2
            Self::Tilted(t) => t.base.tilt(t.z * z),
            _ => {
                let psi = self.psi(z)?;
                if let Some(atoms) = self.atoms() {
                    let mut prev = T::zero();
                    let mut acc = T::zero();
                    let mut tilted = Vec::with_capacity(atoms.len());
                    for (v, w) in atoms {
                        acc += w;
                        let level = acc.min(T::one()).powf(z);
                        if level > prev {
                            tilted.push((v / psi, level - prev));
                        }
                        prev = level;
                    }
                    return Self::discrete(tilted);
                }
                Ok(Self::Tilted(Tilted {
                    base: Box::new(self.clone()),
                    z,
                    psi,
                }))
            }
        }
    }

    /// Draw from `F` by inverse transform.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match self {
            Self::Dirac1 => T::one(),
            Self::Rescaled(r) => r.base.sample(rng) / r.mean,
            _ => {
                let u: f64 = Open01.sample(rng);
                self.quantile(T::lit(u))
            }
        }
    }

    /// Draw from the size-biased law `t ↦ ∫₀^t s dF(s)`; never returns zero.
    pub fn sample_size_biased<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match self {
            Self::Dirac1 => T::one(),
            Self::Frechet(f) => {
                // size-biasing X = (c/E)^α reweights E by E^{−α}: E ~ Gamma(1 − α, 1)
                let g = Gamma::new(1.0 - f.alpha.as_f64(), 1.0).expect("alpha in (0, 1)");
                let e: f64 = g.sample(rng);
                (f.c / T::lit(e)).powf(f.alpha)
            }
            Self::TwoPoint(tp) => tp.q(),
            Self::UnitExponential => {
                let g = Gamma::new(2.0, 1.0).expect("valid gamma");
                T::lit(g.sample(rng))
            }
            Self::Discrete(d) => {
                let biased: Vec<(T, T)> = d.atoms.iter().map(|&(v, w)| (v, v * w)).collect();
                sample_weighted(&biased, rng)
            }
            Self::Rescaled(r) => r.base.sample_size_biased(rng) / r.mean,
            Self::Tilted(_) => {
                let u: f64 = Open01.sample(rng);
                self.size_biased_quantile(T::lit(u))
            }
        }
    }

    /// Inverse of `K(t) = ∫₀^t (1 − F(s)) ds − t (1 − F(t))` by bisection.
    fn size_biased_quantile(&self, p: T) -> T {
        let opts = QuadOptions::with_tol(1e-12);
        let k = |t: T| -> T {
            match integrate(|s| self.survival(s), T::zero(), t, opts) {
                Ok(q) => q.value - t * self.survival(t),
                Err(_) => T::nan(),
            }
        };
        let mut lo = T::zero();
        let mut hi = self.quantile(T::lit(0.5)).max(T::min_positive_value().sqrt());
        let mut guard = 0;
        while !(k(hi) >= p) {
            lo = hi;
            hi *= T::lit(2.0);
            guard += 1;
            if guard > 1_000 {
                return hi;
            }
        }
        for _ in 0..100 {
            let mid = T::lit(0.5) * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= T::lit(1e-12) * hi {
                break;
            }
            if k(mid) >= p {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// `F(t) = G(M_G t)`: rescale a finite-mean cdf to unit mean.
///
/// Canonical families are returned where the result has one (point masses become
/// [`UnitMeanCdf::Dirac1`], exponentials [`UnitMeanCdf::UnitExponential`], atoms
/// `{0, q}` with `q (1 − p₀) = 1` a [`UnitMeanCdf::TwoPoint`]).
pub fn rescale_to_unit_mean<T: Real>(g: &FiniteMeanCdf<T>) -> Result<UnitMeanCdf<T>> {
    let mean = g.mean();
    if !(mean > T::zero() && mean.is_finite()) {
        return Err(Error::Domain(format!("mean must lie in (0, inf), got {mean}")));
    }
    match g {
        FiniteMeanCdf::Point { .. } => Ok(UnitMeanCdf::Dirac1),
        FiniteMeanCdf::Exponential { .. } => Ok(UnitMeanCdf::UnitExponential),
        FiniteMeanCdf::Scaled { base, .. } => Ok((**base).clone()),
        FiniteMeanCdf::Discrete { atoms } => {
            let scaled: Vec<(T, T)> = atoms.iter().map(|&(v, w)| (v / mean, w)).collect();
            if let [(zero, p0), (q, p1)] = scaled[..] {
                let tol = T::tol(1e-12);
                if zero == T::zero() && (q * p1 - T::one()).abs() <= tol {
                    return UnitMeanCdf::two_point(-p0.ln());
                }
            }
            if let [(one, _)] = scaled[..] {
                if (one - T::one()).abs() <= T::tol(1e-12) {
                    return Ok(UnitMeanCdf::Dirac1);
                }
            }
            UnitMeanCdf::discrete(scaled)
        }
        FiniteMeanCdf::Uniform { .. } | FiniteMeanCdf::Gamma { .. } => {
            Ok(UnitMeanCdf::Rescaled(Rescaled { base: g.clone(), mean }))
        }
    }
}
