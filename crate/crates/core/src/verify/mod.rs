//! Monte Carlo checks tying the samplers to the analytic evaluators.
//!
//! Every check draws its samples through [`crate::samplers::streams`], so a
//! report depends only on the seed, never on the worker count.

use std::io::{self, Write};

use crate::distributions::CanonicalModel;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::samplers::{sample_conditional_iid_batch, sample_minstable_batch, sample_pickands_batch};
use crate::stdf::{stdf_canonical, StableTailDependence, WeightVector};

/// Default gate on `|z|`.
pub const DEFAULT_Z_THRESHOLD: f64 = 4.0;

/// Relative tolerance of [`exchangeability_check`].
pub const EXCHANGEABILITY_TOL: f64 = 1e-12;

/// Column names of [`CheckReport::to_csv_row`].
pub const CSV_HEADER: &str = "name,empirical,exact,std_error,z_score,n,passed";

/// Outcome of one Monte Carlo comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub empirical: f64,
    pub exact: f64,
    pub std_error: f64,
    pub z_score: f64,
    pub n: usize,
    pub passed: bool,
}

impl CheckReport {
    fn new(name: String, empirical: f64, exact: f64, std_error: f64, n: usize, threshold: f64) -> Self {
        let diff = empirical - exact;
        let z_score = if std_error > 0.0 {
            diff / std_error
        } else if diff.abs() <= 1e-12 * exact.abs().max(1.0) {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
        Self {
            name,
            empirical,
            exact,
            std_error,
            z_score,
            n,
            passed: z_score.abs() <= threshold,
        }
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.name, self.empirical, self.exact, self.std_error, self.z_score, self.n, self.passed
        )
    }
}

/// Writes the header and one row per report.
pub fn write_csv<W: Write>(out: &mut W, reports: &[CheckReport]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in reports {
        writeln!(out, "{}", r.to_csv_row())?;
    }
    Ok(())
}

/// Which sampler feeds a survival check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampler {
    /// Poisson minima construction.
    #[default]
    MinStable,
    /// First passage of a LePage path.
    ConditionalIid,
}

/// Sample size, seed and gating shared by the checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n: usize,
    pub seed: u64,
    pub workers: usize,
    /// Truncation tolerance handed to the samplers.
    pub tol: f64,
    pub z_threshold: f64,
    pub sampler: Sampler,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n: 100_000,
            seed: 0,
            workers: 1,
            tol: 1e-6,
            z_threshold: DEFAULT_Z_THRESHOLD,
            sampler: Sampler::MinStable,
        }
    }
}

impl McConfig {
    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid("n", format!("need at least 2 draws, got {}", self.n)));
        }
        if !(self.z_threshold > 0.0) {
            return Err(Error::invalid("z_threshold", "must be positive"));
        }
        Ok(())
    }
}

fn label<T: Real>(t: &[T]) -> String {
    t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

/// Mean and sample standard deviation, accumulated around the first value so
/// that constant data gives exactly that value and zero spread.
fn mean_sd(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64, usize) {
    let n = xs.clone().count();
    let shift = xs.clone().next().unwrap_or(0.0);
    let offset = xs.clone().map(|x| x - shift).sum::<f64>() / n as f64;
    let var = xs.map(|x| (x - shift - offset).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    (shift + offset, var.max(0.0).sqrt(), n)
}

/// `P(Y > t)` against `exp(−ℓ(t))`, with `SE = √(p (1 − p) / n)` at the exact `p`.
pub fn mc_survival_check<T: Real>(
    model: &CanonicalModel<T>,
    t: &WeightVector<T>,
    cfg: &McConfig,
) -> Result<CheckReport> {
    Ok(mc_survival_checks(model, std::slice::from_ref(t), cfg)?.remove(0))
}

/// [`mc_survival_check`] at several points sharing one sample.
pub fn mc_survival_checks<T: Real>(
    model: &CanonicalModel<T>,
    points: &[WeightVector<T>],
    cfg: &McConfig,
) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let d = points.iter().map(WeightVector::dim).max().unwrap_or(0).max(1);
    let tol = T::lit(cfg.tol);
    let ys = match cfg.sampler {
        Sampler::MinStable => sample_minstable_batch(model, d, cfg.n, cfg.seed, tol, cfg.workers)?,
        Sampler::ConditionalIid => sample_conditional_iid_batch(model, d, cfg.n, cfg.seed, tol, cfg.workers)?,
    };
    let tag = match cfg.sampler {
        Sampler::MinStable => "survival",
        Sampler::ConditionalIid => "survival_ciid",
    };
    points
        .iter()
        .map(|t| {
            let exact = (-stdf_canonical(model, t)?).exp().as_f64();
            let hits = ys
                .iter()
                .filter(|y| y.iter().zip(t.entries()).all(|(a, b)| a > b))
                .count();
            let se = (exact * (1.0 - exact) / cfg.n as f64).sqrt();
            Ok(CheckReport::new(
                format!("{tag}[t={}]", label(t.entries())),
                hits as f64 / cfg.n as f64,
                exact,
                se,
                cfg.n,
                cfg.z_threshold,
            ))
        })
        .collect()
}

/// `d E[max_k t_k X_k]` over Pickands draws against `ℓ(t)`, `d = d(t)`.
pub fn mc_pickands_check<T: Real>(
    model: &CanonicalModel<T>,
    t: &WeightVector<T>,
    cfg: &McConfig,
) -> Result<CheckReport> {
    cfg.validate()?;
    let d = t.dim();
    if d == 0 {
        return Err(Error::invalid("t", "needs a positive entry"));
    }
    let xs = sample_pickands_batch(model, d, cfg.n, cfg.seed, cfg.workers)?;
    let scale = T::from_count(d);
    let values = xs.iter().map(|x| (scale * x.weighted_max(t.entries())).as_f64());
    let (mean, sd, n) = mean_sd(values);
    let exact = stdf_canonical(model, t)?.as_f64();
    Ok(CheckReport::new(
        format!("pickands[t={}]", label(t.entries())),
        mean,
        exact,
        sd / (n as f64).sqrt(),
        n,
        cfg.z_threshold,
    ))
}

/// Coordinate means of Pickands draws against `1/d`.
pub fn mc_pickands_coordinate_checks<T: Real>(
    model: &CanonicalModel<T>,
    d: usize,
    cfg: &McConfig,
) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let xs = sample_pickands_batch(model, d, cfg.n, cfg.seed, cfg.workers)?;
    Ok((0..d)
        .map(|k| {
            let (mean, sd, n) = mean_sd(xs.iter().map(|x| x.coords[k].as_f64()));
            CheckReport::new(
                format!("pickands_coord[d={d};k={}]", k + 1),
                mean,
                1.0 / d as f64,
                sd / (n as f64).sqrt(),
                n,
                cfg.z_threshold,
            )
        })
        .collect())
}

/// Mean of `Y₁` against 1; the name carries the KS distance to `Exp(1)`.
pub fn mc_margin_check<T: Real>(model: &CanonicalModel<T>, cfg: &McConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let tol = T::lit(cfg.tol);
    let ys = match cfg.sampler {
        Sampler::MinStable => sample_minstable_batch(model, 1, cfg.n, cfg.seed, tol, cfg.workers)?,
        Sampler::ConditionalIid => sample_conditional_iid_batch(model, 1, cfg.n, cfg.seed, tol, cfg.workers)?,
    };
    let mut first: Vec<f64> = ys.iter().map(|y| y[0].as_f64()).collect();
    let (mean, sd, n) = mean_sd(first.iter().copied());
    first.sort_by(f64::total_cmp);
    let ks = ks_exponential(&first);
    Ok(CheckReport::new(
        format!("margin_mean[ks={ks:.6}]"),
        mean,
        1.0,
        sd / (n as f64).sqrt(),
        n,
        cfg.z_threshold,
    ))
}

/// One-sample Kolmogorov–Smirnov distance of sorted data to the unit exponential.
pub fn ks_exponential(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = -(-x.max(0.0)).exp_m1();
            (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
        })
        .fold(0.0, f64::max)
}

/// `ℓ(t) = ℓ(t ∘ perm)` to relative `1e−12`, where position `i` of the permuted
/// vector holds `t[perm[i]]` (0-based).
pub fn exchangeability_check<T: Real, E: StableTailDependence<T> + ?Sized>(
    ell: &E,
    t: &[T],
    perm: &[usize],
) -> Result<bool> {
    let mut seen = vec![false; t.len()];
    if perm.len() != t.len()
        || perm
            .iter()
            .any(|&p| p >= t.len() || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::invalid("perm", format!("not a permutation of 0..{}", t.len())));
    }
    let permuted: Vec<T> = perm.iter().map(|&p| t[p]).collect();
    let a = ell.stdf_at(t)?;
    let b = ell.stdf_at(&permuted)?;
    Ok((a - b).abs() <= T::tol(EXCHANGEABILITY_TOL) * a.abs().max(T::one()))
}
