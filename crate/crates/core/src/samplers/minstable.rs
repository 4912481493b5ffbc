use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::distributions::{CanonicalModel, MixingMeasure, UnitMeanCdf};
use crate::error::{Error, Result};
use crate::real::Real;

/// Largest number of Poisson arrivals any truncated series may consume.
pub const MAX_ARRIVALS: u64 = 10_000_000;

pub(crate) fn exp1<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let e: f64 = Exp1.sample(rng);
    T::lit(e)
}

/// Whether the stopping rule is evaluated after arrival `n`.
pub(crate) fn check_due(n: u64) -> bool {
    n <= 32 || n.is_multiple_of(n / 16)
}

/// One draw of `(Y₁, …, Y_d)` with survival function `exp(−ℓ(t))`.
///
/// The dependent part is `min_n Γ_n / X_k^{(n)}` over unit-rate Poisson arrivals
/// `Γ_n`, each carrying `X^{(n)}` iid from an `F` drawn from `μ`. The series stops
/// once the expected number of later arrivals that could still lower any
/// coordinate is at most `tol`; by Markov's inequality `tol` then bounds the
/// probability that a returned coordinate exceeds its untruncated value.
pub fn sample_minstable<T: Real, R: Rng + ?Sized>(
    model: &CanonicalModel<T>,
    d: usize,
    rng: &mut R,
    tol: T,
) -> Result<Vec<T>> {
    if d == 0 {
        return Err(Error::invalid("d", "must be at least 1"));
    }
    if !(tol > T::zero()) {
        return Err(Error::invalid("tol", format!("must be positive, got {tol}")));
    }
    let b = model.b();
    let mu = match model.mu() {
        Some(mu) if b < T::one() => mu,
        _ => return Ok((0..d).map(|_| exp1(rng)).collect()),
    };
    // With b > 0 the independent part E_k / b caps what the series has to resolve.
    let mut running: Vec<T> = if b > T::zero() {
        let ratio = (T::one() - b) / b;
        (0..d).map(|_| ratio * exp1::<T, R>(rng)).collect()
    } else {
        vec![T::infinity(); d]
    };
    poisson_minima(mu, &mut running, rng, tol)?;
    let scale = T::one() - b;
    Ok(running.into_iter().map(|m| m / scale).collect())
}

/// Lowers each `running[k]` to `min(running[k], min_n Γ_n / X_k^{(n)})`.
///
/// Only arrivals that lower at least one coordinate are simulated. Given the
/// current minima `m`, these form a Poisson process with rate
/// `q(Γ) = Σ_i w_i (1 − Π_k F_i(Γ / m_k))`, which decreases in `Γ` between
/// events, so they are drawn exactly by thinning against the last computed
/// rate. Each accepted arrival then gets its component and exceedances from
/// the conditional law given that something improves.
fn poisson_minima<T: Real, R: Rng + ?Sized>(
    mu: &MixingMeasure<T>,
    running: &mut [T],
    rng: &mut R,
    tol: T,
) -> Result<()> {
    let mut logs = vec![T::zero(); running.len()];
    let mut rates = vec![T::zero(); mu.len()];
    let mut gamma = T::zero();
    let mut bound = T::infinity();
    let mut rate_bar = event_rate(mu, running, gamma, &mut rates);
    for _ in 0..MAX_ARRIVALS {
        if running.iter().all(|m| m.is_finite()) {
            bound = remaining_bound(mu, running, gamma)?;
            if bound <= tol {
                return Ok(());
            }
        }
        if !(rate_bar > T::zero()) {
            return Ok(());
        }
        gamma += exp1::<T, R>(rng) / rate_bar;
        if !gamma.is_finite() {
            break;
        }
        let q = event_rate(mu, running, gamma, &mut rates);
        let u: f64 = rng.random();
        if T::lit(u) * rate_bar >= q {
            rate_bar = q;
            continue;
        }
        let index = pick_weighted(&rates, q, rng);
        improve(mu.cdf(index), running, gamma, &mut logs, rng);
        rate_bar = event_rate(mu, running, gamma, &mut rates);
    }
    Err(Error::Resource {
        context: "min-stable Poisson series",
        budget: MAX_ARRIVALS,
        achieved_bound: bound.as_f64(),
    })
}

/// Fills `rates[i] = w_i (1 − Π_k F_i(γ / m_k))` and returns their sum.
fn event_rate<T: Real>(mu: &MixingMeasure<T>, running: &[T], gamma: T, rates: &mut [T]) -> T {
    let mut total = T::zero();
    for ((w, f), r) in mu.components().iter().zip(rates.iter_mut()) {
        let log_all: T = running.iter().map(|&m| f.ln_cdf(gamma / m)).sum();
        *r = *w * -log_all.exp_m1();
        total += *r;
    }
    total
}

fn pick_weighted<T: Real, R: Rng + ?Sized>(weights: &[T], total: T, rng: &mut R) -> usize {
    if weights.len() == 1 {
        return 0;
    }
    let target = T::lit(rng.random::<f64>()) * total;
    let mut acc = T::zero();
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    weights.iter().rposition(|&w| w > T::zero()).unwrap_or(0)
}

/// One arrival from `F` conditioned on `X_k > γ / m_k` for at least one `k`.
fn improve<T: Real, R: Rng + ?Sized>(f: &UnitMeanCdf<T>, running: &mut [T], gamma: T, logs: &mut [T], rng: &mut R) {
    for (l, &m) in logs.iter_mut().zip(running.iter()) {
        *l = f.ln_cdf(gamma / m);
    }
    // the first exceeding coordinate j has weight Π_{k<j} F(a_k) (1 − F(a_j))
    let mut prefix = T::zero();
    let mut weights: Vec<T> = Vec::with_capacity(logs.len());
    for &l in logs.iter() {
        weights.push(prefix.exp() * -l.exp_m1());
        prefix += l;
    }
    let total: T = weights.iter().copied().sum();
    let first = pick_weighted(&weights, total, rng);
    for k in first..running.len() {
        let exceeds = k == first || T::lit(rng.random::<f64>()) < -logs[k].exp_m1();
        if exceeds {
            let a = gamma / running[k];
            let x = f.sample_above(a, rng);
            if x > T::zero() {
                running[k] = running[k].min(gamma / x);
            }
        }
    }
}

/// `Σ_k m_k ∫_{Γ/m_k}^∞ (1 − F̄(u)) du` with `F̄` the mixture cdf: the expected
/// number of later arrivals that lower some coordinate.
fn remaining_bound<T: Real>(mu: &MixingMeasure<T>, running: &[T], gamma: T) -> Result<T> {
    let mut total = T::zero();
    for &m in running {
        total += m * mu.tail_integral(gamma / m)?;
    }
    Ok(total)
}
