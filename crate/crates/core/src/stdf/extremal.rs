use super::WeightVector;
use crate::distributions::{CanonicalModel, UnitMeanCdf};
use crate::error::Result;
use crate::quadrature::{integrate, integrate_to_infinity, QuadOptions};
use crate::real::Real;

/// Absolute tolerance of the quadrature route for `ℓ_F`.
pub const STDF_QUAD_TOL: f64 = 1e-9;

/// `ℓ_F(t) = ∫₀^∞ (1 − Π_k F(s / t_k)) ds`.
///
/// Closed forms: Fréchet gives the logistic `(Σ t_k^{1/α})^α`, `Dirac1` gives
/// `max t_k`, atomic families are integrated exactly as step functions.
/// Everything else goes through [`stdf_extremal_quadrature`].
pub fn stdf_extremal<T: Real>(f: &UnitMeanCdf<T>, t: &WeightVector<T>) -> Result<T> {
    let groups = t.grouped();
    if groups.is_empty() {
        return Ok(T::zero());
    }
    match f {
        UnitMeanCdf::Dirac1 => Ok(groups[0].0),
        UnitMeanCdf::Frechet(fr) => {
            let inv = T::one() / fr.alpha();
            let top = groups[0].0;
            let s: T = groups
                .iter()
                .map(|&(x, m)| T::from_count(m) * (x / top).powf(inv))
                .sum();
            Ok(top * s.powf(fr.alpha()))
        }
        _ => match f.atoms() {
            Some(atoms) => Ok(atomic_stdf(&atoms, &groups)),
            None => quadrature_stdf(f, &groups),
        },
    }
}

/// `ℓ_F(t)` by adaptive quadrature for every family, without closed forms.
pub fn stdf_extremal_quadrature<T: Real>(f: &UnitMeanCdf<T>, t: &WeightVector<T>) -> Result<T> {
    let groups = t.grouped();
    if groups.is_empty() {
        return Ok(T::zero());
    }
    quadrature_stdf(f, &groups)
}

fn quadrature_stdf<T: Real>(f: &UnitMeanCdf<T>, groups: &[(T, usize)]) -> Result<T> {
    let integrand = |s: T| -> T {
        let log_prod: T = groups.iter().map(|&(x, m)| T::from_count(m) * f.ln_cdf(s / x)).sum();
        -log_prod.exp_m1()
    };
    // jump locations of the integrand, so that no panel straddles a step
    let mut breaks: Vec<T> = f
        .atoms()
        .map(|atoms| {
            groups
                .iter()
                .flat_map(|&(x, _)| atoms.iter().map(move |&(v, _)| v * x))
                .filter(|&b| b > T::zero())
                .collect()
        })
        .unwrap_or_default();
    breaks.sort_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
    breaks.dedup();
    let opts = QuadOptions::with_tol(STDF_QUAD_TOL / (breaks.len() + 1) as f64);
    let mut total = T::zero();
    let mut lo = T::zero();
    for &b in &breaks {
        total += integrate(integrand, lo, b, opts)?.value;
        lo = b;
    }
    let split = (groups[0].0 * f.split_point()).max(lo);
    total += integrate_to_infinity(integrand, lo, split, opts)?.value;
    Ok(total)
}

/// Exact integral of `1 − Π_j F(s/t_j)^{m_j}` for a step-function `F`.
fn atomic_stdf<T: Real>(atoms: &[(T, T)], groups: &[(T, usize)]) -> T {
    // level of F at zero and the jumps above it
    let mut base_level = T::zero();
    let mut jumps: Vec<(T, T)> = Vec::with_capacity(atoms.len());
    let mut acc = T::zero();
    for &(v, w) in atoms {
        acc += w;
        if v == T::zero() {
            base_level = acc;
        } else {
            jumps.push((v, acc.min(T::one())));
        }
    }
    if let Some(last) = jumps.last_mut() {
        last.1 = T::one();
    }
    let mut events: Vec<(T, usize, T)> = Vec::with_capacity(jumps.len() * groups.len());
    for (j, &(x, _)) in groups.iter().enumerate() {
        for &(v, level) in &jumps {
            events.push((v * x, j, level));
        }
    }
    events.sort_by(|a, b| a.0.as_f64().total_cmp(&b.0.as_f64()));
    let mut levels = vec![base_level; groups.len()];
    let product = |levels: &[T]| -> T {
        levels
            .iter()
            .zip(groups)
            .map(|(&l, &(_, m))| l.powi(m as i32))
            .fold(T::one(), |a, b| a * b)
    };
    let mut total = T::zero();
    let mut s_prev = T::zero();
    let mut current = product(&levels);
    let mut i = 0;
    while i < events.len() {
        let s = events[i].0;
        total += (s - s_prev) * (T::one() - current);
        while i < events.len() && events[i].0 == s {
            levels[events[i].1] = events[i].2;
            i += 1;
        }
        current = product(&levels);
        s_prev = s;
    }
    total
}

/// `ℓ(t) = b Σ t_k + (1 − b) Σ_i w_i ℓ_{F_i}(t)`.
pub fn stdf_canonical<T: Real>(model: &CanonicalModel<T>, t: &WeightVector<T>) -> Result<T> {
    let b = model.b();
    let mut value = b * t.sum();
    if b < T::one() {
        if let Some(mu) = model.mu() {
            let mut mixed = T::zero();
            for (w, f) in mu.components() {
                mixed += *w * stdf_extremal(f, t)?;
            }
            value += (T::one() - b) * mixed;
        }
    }
    Ok(value)
}

/// `2 − ∫₀^∞ (1 − F(s))² ds`, which equals `ℓ_F(1, 1)`.
pub fn pairwise_l2_identity<T: Real>(f: &UnitMeanCdf<T>) -> Result<T> {
    let l2 = match f.atoms() {
        Some(atoms) => UnitMeanCdf::atomic_integral(&atoms, |p| (T::one() - p) * (T::one() - p)),
        None => {
            let q = integrate_to_infinity(
                |s| {
                    let r = f.survival(s);
                    r * r
                },
                T::zero(),
                f.split_point(),
                QuadOptions::with_tol(1e-11),
            )?;
            q.value
        }
    };
    Ok(T::lit(2.0) - l2)
}
