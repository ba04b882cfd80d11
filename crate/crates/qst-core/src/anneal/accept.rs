//! Heat-bath acceptance rule.

use rand::Rng;

use crate::scalar::Real;

/// Accepts a proposed move with probability `exp(-ds) / (1 + exp(-ds))`.
///
/// The two branches keep the exponential argument nonpositive, so the rule
/// is overflow-free for any finite or infinite `delta_s`: large positive
/// `delta_s` is rejected almost surely, large negative accepted almost
/// surely, and `delta_s = 0` is a fair coin.
pub fn heat_bath_accept<T: Real, R: Rng + ?Sized>(delta_s: T, rng: &mut R) -> bool {
    let p = if delta_s >= T::zero() {
        let e = (-delta_s).exp();
        e / (T::one() + e)
    } else {
        T::one() / (T::one() + delta_s.exp())
    };
    T::unit_uniform(rng) < p
}
