//! Exchangeable min-stable multivariate exponential sequences in their
//! canonical `(b, μ)` form.
//!
//! The stable tail dependence function of such a sequence is
//! `ℓ(t) = b·Σ t_k + (1 − b)·∫ ℓ_F(t) μ(dF)`, where `μ` mixes unit-mean
//! distribution functions `F` and `ℓ_F(t) = ∫₀^∞ 1 − Π_k F(s/t_k) ds`.
//!
//! - [`distributions`]: unit-mean families, mixing measures, model types.
//! - [`stdf`]: evaluators, Lévy specifications, transforms, drift recovery.
//! - [`samplers`]: exact min-stable draws, Pickands points, LePage paths.
//! - [`verify`]: Monte Carlo checks reported as CSV rows.
//! - [`spec`]: JSON model descriptions.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix `f64`, and [`f32`] holds the single-precision ones.

// Negated comparisons reject NaN inputs; quadrature nodes keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod distributions;
pub mod error;
pub mod quadrature;
pub mod real;
pub mod samplers;
pub mod spec;
pub mod special;
pub mod stdf;
pub mod verify;

pub use error::{Error, Result};
pub use real::Real;
pub use samplers::{
    sample_conditional_iid, sample_conditional_iid_batch, sample_conditional_iid_model, sample_idt_path,
    sample_minstable, sample_minstable_batch, sample_pickands, sample_pickands_batch,
};
pub use spec::ModelSpec;
pub use stdf::{
    check_3margin_ciid, copula, estimate_drift, pairwise_l2_identity, stdf_canonical, stdf_extremal,
    InclusionExclusion, StableTailDependence, StableTransform,
};
pub use verify::{CheckReport, McConfig};

pub type UnitMeanCdf = distributions::UnitMeanCdf<f64>;
pub type FiniteMeanCdf = distributions::FiniteMeanCdf<f64>;
pub type MixingMeasure = distributions::MixingMeasure<f64>;
pub type CanonicalModel = distributions::CanonicalModel<f64>;
pub type IdtTriplet = distributions::IdtTriplet<f64>;
pub type WeightVector = stdf::WeightVector<f64>;
pub type LevySpec = stdf::LevySpec<f64>;
pub type ThreeMargin = stdf::ThreeMargin<f64>;
pub type IdtPath = samplers::IdtPath<f64>;
pub type PickandsSample = samplers::PickandsSample<f64>;

/// Single-precision aliases.
pub mod f32 {
    use super::{distributions, samplers, stdf};

    pub type UnitMeanCdf = distributions::UnitMeanCdf<f32>;
    pub type FiniteMeanCdf = distributions::FiniteMeanCdf<f32>;
    pub type MixingMeasure = distributions::MixingMeasure<f32>;
    pub type CanonicalModel = distributions::CanonicalModel<f32>;
    pub type IdtTriplet = distributions::IdtTriplet<f32>;
    pub type WeightVector = stdf::WeightVector<f32>;
    pub type LevySpec = stdf::LevySpec<f32>;
    pub type IdtPath = samplers::IdtPath<f32>;
    pub type PickandsSample = samplers::PickandsSample<f32>;
}
