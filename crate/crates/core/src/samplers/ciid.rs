use rand::Rng;

use super::lepage::sample_idt_path;
use super::minstable::exp1;
use crate::distributions::{CanonicalModel, IdtTriplet};
use crate::error::{Error, Result};
use crate::real::Real;

/// `Y_k = inf{t > 0 : H_t > η_k}` for one LePage path `H` and iid unit
/// exponentials `η_1, …, η_d`.
///
/// The triplet must satisfy `b + c = 1` so that the margins are unit exponential.
pub fn sample_conditional_iid<T: Real, R: Rng + ?Sized>(
    triplet: &IdtTriplet<T>,
    d: usize,
    rng: &mut R,
    tol: T,
) -> Result<Vec<T>> {
    if d == 0 {
        return Err(Error::invalid("d", "must be at least 1"));
    }
    if !triplet.is_normalized() {
        return Err(Error::invalid(
            "triplet",
            format!("b + c must equal 1, got {}", triplet.b() + triplet.c()),
        ));
    }
    let levels: Vec<T> = (0..d).map(|_| exp1(rng)).collect();
    let mut path = sample_idt_path(triplet, T::one(), rng, tol)?;
    levels.into_iter().map(|eta| path.first_passage(eta, rng)).collect()
}

/// [`sample_conditional_iid`] for a canonical pair; the pure-drift model
/// `b = 1` has `H_t = t` and returns the levels themselves.
pub fn sample_conditional_iid_model<T: Real, R: Rng + ?Sized>(
    model: &CanonicalModel<T>,
    d: usize,
    rng: &mut R,
    tol: T,
) -> Result<Vec<T>> {
    match model.to_triplet() {
        Some(triplet) => sample_conditional_iid(&triplet, d, rng, tol),
        None if d == 0 => Err(Error::invalid("d", "must be at least 1")),
        None => Ok((0..d).map(|_| exp1(rng)).collect()),
    }
}
