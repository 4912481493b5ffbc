use std::f64::consts::PI;

use rand::distr::Open01;
use rand::Rng;

use super::minstable::{check_due, exp1, MAX_ARRIVALS};
use crate::distributions::{IdtTriplet, MixingMeasure, Side, UnitMeanCdf};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::gamma;

/// Cap on bracket doublings in the first-passage search.
pub const MAX_DOUBLINGS: u32 = 1_000_000;

/// How the terms of one mixture component are summed.
#[derive(Debug, Clone)]
enum Terms<T> {
    /// `−ln F(Γ/t) = c_α t^{1/α} Γ^{−1/α}`. The full sum `Σ Γ^{−1/α}` over the
    /// component's arrivals is positive α-stable and is drawn exactly.
    Frechet {
        c: T,
        inv_alpha: T,
        sum: T,
    },
    /// Steps only; terms vanish once `Γ/t` exceeds the largest atom.
    Atomic {
        top: T,
        atoms: Vec<T>,
    },
    General,
}

#[derive(Debug, Clone)]
struct Component<T> {
    terms: Terms<T>,
    gammas: Vec<T>,
}

/// A truncated LePage series path `H_t = b t + Σ_k −ln F^{(k)}((Γ_k / t)−)`
/// of a non-decreasing strong-IDT process, where `Γ_k` are the arrivals of a
/// Poisson process with rate `c` and `F^{(k)}` are iid draws from `μ`.
///
/// Fréchet components of `μ` contribute `c_α t^{1/α} S` with `S` drawn exactly.
/// Arrivals of the other components are generated until the expected omitted
/// mass on `[0, horizon]` is certified below the tolerance.
/// [`IdtPath::extend`] continues the same series to a longer horizon.
#[derive(Debug, Clone)]
pub struct IdtPath<T> {
    drift: T,
    intensity: T,
    mu: MixingMeasure<T>,
    arrivals: Vec<(T, usize)>,
    components: Vec<Component<T>>,
    /// Components summed as a series, with cumulative weights.
    series: Vec<(usize, T)>,
    series_rate: T,
    horizon: T,
    tol: T,
    truncation_bound: T,
    /// First time from which some term is `+∞`.
    pin: T,
}

/// Generates a LePage path certified on `[0, horizon]` to within `tol`.
pub fn sample_idt_path<T: Real, R: Rng + ?Sized>(
    triplet: &IdtTriplet<T>,
    horizon: T,
    rng: &mut R,
    tol: T,
) -> Result<IdtPath<T>> {
    if !(tol > T::zero()) {
        return Err(Error::invalid("tol", format!("must be positive, got {tol}")));
    }
    let mu = triplet.mu().clone();
    let mut series = Vec::new();
    let mut series_weight = T::zero();
    let components = mu
        .components()
        .iter()
        .map(|(w, f)| Component {
            terms: match (f, f.atoms()) {
                (UnitMeanCdf::Frechet(fr), _) => {
                    let rate = triplet.c() * *w;
                    let scale = (rate * gamma(T::one() - fr.alpha())).powf(T::one() / fr.alpha());
                    Terms::Frechet {
                        c: fr.c(),
                        inv_alpha: T::one() / fr.alpha(),
                        sum: scale * positive_stable(fr.alpha(), rng),
                    }
                }
                (_, Some(atoms)) => Terms::Atomic {
                    top: atoms.last().map_or(T::zero(), |a| a.0),
                    atoms: atoms.iter().map(|a| a.0).filter(|&v| v > T::zero()).collect(),
                },
                _ => Terms::General,
            },
            gammas: Vec::new(),
        })
        .collect::<Vec<_>>();
    for (i, comp) in components.iter().enumerate() {
        if !matches!(comp.terms, Terms::Frechet { .. }) {
            series_weight += mu.components()[i].0;
            series.push((i, series_weight));
        }
    }
    let mut path = IdtPath {
        drift: triplet.b(),
        intensity: triplet.c(),
        mu,
        arrivals: Vec::new(),
        components,
        series_rate: triplet.c() * series_weight,
        series,
        horizon: T::zero(),
        tol,
        truncation_bound: T::infinity(),
        pin: T::infinity(),
    };
    path.extend(horizon, rng)?;
    Ok(path)
}

impl<T: Real> IdtPath<T> {
    pub fn drift(&self) -> T {
        self.drift
    }

    pub fn intensity(&self) -> T {
        self.intensity
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    /// Certified bound on the expected omitted mass over `[0, horizon]`.
    pub fn truncation_bound(&self) -> T {
        self.truncation_bound
    }

    /// The time from which the path is `+∞` (`∞` if no arrival pins it).
    pub fn pin_time(&self) -> T {
        self.pin
    }

    /// Arrival times `Γ_k` of the series components, each with its cdf.
    pub fn arrivals(&self) -> impl Iterator<Item = (T, &UnitMeanCdf<T>)> + '_ {
        self.arrivals.iter().map(|&(g, i)| (g, self.mu.cdf(i)))
    }

    pub fn len(&self) -> usize {
        self.arrivals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrivals.is_empty()
    }

    /// Continues the series until the bound holds on `[0, horizon]`.
    pub fn extend<R: Rng + ?Sized>(&mut self, horizon: T, rng: &mut R) -> Result<()> {
        if !(horizon > T::zero() && horizon.is_finite()) {
            return Err(Error::invalid(
                "horizon",
                format!("must be positive and finite, got {horizon}"),
            ));
        }
        if horizon <= self.horizon {
            return Ok(());
        }
        let mut gamma = self.arrivals.last().map_or(T::zero(), |a| a.0);
        let mut n = self.arrivals.len() as u64;
        let mut bound = self.bound_after(gamma, horizon)?;
        while bound > self.tol {
            if n >= MAX_ARRIVALS {
                return Err(Error::Resource {
                    context: "LePage series",
                    budget: MAX_ARRIVALS,
                    achieved_bound: bound.as_f64(),
                });
            }
            gamma += exp1::<T, R>(rng) / self.series_rate;
            let index = self.series_index(rng);
            self.push(gamma, index);
            n += 1;
            if check_due(n) || self.pin <= horizon {
                bound = self.bound_after(gamma, horizon)?;
            }
        }
        self.horizon = horizon;
        self.truncation_bound = bound;
        Ok(())
    }

    fn series_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = self.series.last().map_or(T::zero(), |s| s.1);
        let u = T::lit(rng.random::<f64>()) * total;
        let k = self.series.partition_point(|s| s.1 <= u).min(self.series.len() - 1);
        self.series[k].0
    }

    fn push(&mut self, gamma: T, index: usize) {
        let smin = self.mu.cdf(index).support_min();
        if smin > T::zero() {
            self.pin = self.pin.min(gamma / smin);
        }
        self.arrivals.push((gamma, index));
        self.components[index].gammas.push(gamma);
    }

    /// Expected omitted mass of series arrivals beyond `gamma` on `[0, min(h, pin)]`.
    ///
    /// With `L` the left-limit envelope of the series cdfs at `γ / h`,
    /// `−ln x <= (1 − x) / x` bounds it by `c h Σ_i w_i ∫_{γ/h}^∞ (1 − F_i) / L`.
    fn bound_after(&self, gamma: T, horizon: T) -> Result<T> {
        if self.series.is_empty() {
            return Ok(T::zero());
        }
        if gamma == T::zero() {
            return Ok(T::infinity());
        }
        let h = horizon.min(self.pin);
        let a = gamma / h;
        let mut tail = T::zero();
        let mut floor = T::one();
        for &(i, _) in &self.series {
            let (w, f) = &self.mu.components()[i];
            tail += *w * f.tail_integral(a)?;
            floor = floor.min(f.cdf_side(a, Side::Left));
        }
        if tail == T::zero() {
            return Ok(T::zero());
        }
        if !(floor > T::zero()) {
            return Ok(T::infinity());
        }
        Ok(self.intensity * h * tail / floor)
    }

    /// `H_t`, possibly `+∞`; `t` must not exceed the certified horizon.
    pub fn eval(&self, t: T) -> Result<T> {
        if t > self.horizon {
            return Err(Error::Domain(format!(
                "t = {t} lies beyond the certified horizon {}",
                self.horizon
            )));
        }
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: T) -> T {
        if !(t > T::zero()) {
            return T::zero();
        }
        if t >= self.pin {
            return T::infinity();
        }
        let mut total = self.drift * t;
        for (i, comp) in self.components.iter().enumerate() {
            let f = self.mu.cdf(i);
            match &comp.terms {
                Terms::Frechet { c, inv_alpha, sum } => total += *c * t.powf(*inv_alpha) * *sum,
                Terms::Atomic { top, .. } => {
                    for &g in &comp.gammas {
                        let u = g / t;
                        if u > *top {
                            break;
                        }
                        total += -f.ln_cdf_side(u, Side::Left);
                    }
                }
                Terms::General => {
                    for &g in &comp.gammas {
                        total += -f.ln_cdf_side(g / t, Side::Left);
                    }
                }
            }
        }
        total
    }

    /// Times in `(lo, hi]` where some term jumps: `Γ_k / v` for atoms `v` of `F^{(k)}`.
    fn jump_times_in(&self, lo: T, hi: T) -> Vec<T> {
        let mut out = Vec::new();
        for comp in &self.components {
            if let Terms::Atomic { atoms, .. } = &comp.terms {
                for &g in &comp.gammas {
                    out.extend(atoms.iter().map(|&v| g / v).filter(|&j| j > lo && j <= hi));
                }
            }
        }
        if self.pin > lo && self.pin <= hi {
            out.push(self.pin);
        }
        out.sort_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
        out
    }

    /// `inf{t > 0 : H_t > level}`, extending the series as needed.
    ///
    /// The bracket `[0, t_hi]` doubles `t_hi` from 1, then bisection runs to a
    /// relative width of `1e−10`. A jump inside the final bracket that already
    /// exceeds the level is returned exactly.
    pub fn first_passage<R: Rng + ?Sized>(&mut self, level: T, rng: &mut R) -> Result<T> {
        let two = T::lit(2.0);
        let mut lo = T::zero();
        let mut hi = T::one();
        let mut doublings = 0u32;
        loop {
            if hi > self.horizon {
                self.extend(hi, rng)?;
            }
            if self.eval_unchecked(hi) > level {
                break;
            }
            lo = hi;
            hi *= two;
            doublings += 1;
            if doublings >= MAX_DOUBLINGS || !hi.is_finite() {
                return Err(Error::Resource {
                    context: "first-passage bracket",
                    budget: u64::from(MAX_DOUBLINGS),
                    achieved_bound: hi.as_f64(),
                });
            }
        }
        let rel = T::tol(1e-10);
        while hi - lo > rel * hi {
            let mid = lo + (hi - lo) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval_unchecked(mid) > level {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        for j in self.jump_times_in(lo, hi) {
            if self.eval_unchecked(j) > level {
                return Ok(j);
            }
        }
        Ok(hi)
    }
}

/// Kanter's representation of `S ≥ 0` with `E[e^{−sS}] = e^{−s^α}`.
fn positive_stable<T: Real, R: Rng + ?Sized>(alpha: T, rng: &mut R) -> T {
    let a = alpha.as_f64();
    let u = PI * rng.sample::<f64, _>(Open01);
    let w: f64 = exp1(rng);
    let s = (a * u).sin() / u.sin().powf(1.0 / a) * (((1.0 - a) * u).sin() / w).powf((1.0 - a) / a);
    T::lit(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kanter_draw_has_stable_laplace_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        for alpha in [0.2f64, 0.5, 0.9] {
            for s in [0.5f64, 1.0, 3.0] {
                let vals: Vec<f64> = (0..n).map(|_| (-s * positive_stable(alpha, &mut rng)).exp()).collect();
                let mean = vals.iter().sum::<f64>() / n as f64;
                let sd = (vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0)).sqrt();
                let exact = (-f64::powf(s, alpha)).exp();
                let z = (mean - exact) / (sd / (n as f64).sqrt());
                assert!(z.abs() <= 4.0, "alpha={alpha} s={s}: z = {z}");
            }
        }
    }

    #[test]
    fn one_half_stable_is_levy() {
        // S = 1 / (4 G) with G ~ Gamma(1/2, 1) for α = 1/2.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 100_000;
        let below = (0..n).filter(|_| positive_stable(0.5f64, &mut rng) <= 1.0).count() as f64 / n as f64;
        let exact = crate::special::gamma_q(0.5f64, 0.25).unwrap();
        let se = (exact * (1.0 - exact) / n as f64).sqrt();
        assert!(((below - exact) / se).abs() <= 4.0, "{below} vs {exact}");
    }
}
