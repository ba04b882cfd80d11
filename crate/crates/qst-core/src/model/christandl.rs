//! Engineered coupling profile with analytically perfect end-to-end transfer.
//!
//! A chain with hoppings `J_i = J0 * sqrt(i * (n - i))` is the angular
//! momentum ladder in disguise: its single-excitation spectrum is equally
//! spaced, and evolution for `t = pi / (2 J0)` maps site 1 onto site `n`
//! exactly. Used as the known-good oracle for the evolution machinery and as
//! a benchmark start for optimizers.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Hoppings `J_i = j0 * sqrt(i * (n - i))` for `i = 1..n-1`.
pub fn christandl_couplings<T: Real>(n: usize, j0: T) -> Result<Vec<T>> {
    if n < 2 {
        return Err(Error::ChainTooShort(n));
    }
    if !(j0 > T::zero()) || !j0.is_finite() {
        return Err(Error::ParamMismatch(format!(
            "base coupling must be finite and positive, got {}",
            j0.as_f64()
        )));
    }
    Ok((1..n)
        .map(|i| j0 * T::from_usize(i * (n - i)).unwrap().sqrt())
        .collect())
}

/// Time of the first perfect transfer, `pi / (2 j0)`.
pub fn christandl_transfer_time<T: Real>(j0: T) -> T {
    T::pi() / (T::of(2.0) * j0)
}
