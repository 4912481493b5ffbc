//! Unit-mean distribution functions, mixing measures over them, and the model
//! types `(b, μ)` and `(b, c, μ)` built on top.

mod finite_mean;
mod mixing;
mod model;
mod unit_mean;

pub use finite_mean::FiniteMeanCdf;
pub use mixing::{MixingMeasure, WEIGHT_SUM_TOL};
pub use model::{CanonicalModel, IdtTriplet, NORMALIZATION_TOL};
pub use unit_mean::{
    rescale_to_unit_mean, Discrete, Frechet, Rescaled, Side, Tilted, TwoPoint, UnitMeanCdf, QUAD_TOL, UNIT_MEAN_TOL,
};

#[cfg(test)]
mod tests;
