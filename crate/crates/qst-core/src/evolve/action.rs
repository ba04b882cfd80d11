//! Cost function driving the annealers.
//!
//! The action compares the magnitudes of the evolved columns against ideal
//! target columns (a single 1 in the destination row). Comparing magnitudes
//! rather than complex entries keeps the cost phase-insensitive, so zero
//! action coincides exactly with unit transfer fidelity.

use crate::error::{Error, Result};
use crate::evolve::propagator::{TransferTarget, UnitaryMatrix};
use crate::scalar::Real;

fn validate_targets(dim: usize, targets: &[TransferTarget]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::InvalidTarget(
            "at least one transfer target is required".into(),
        ));
    }
    for (i, t) in targets.iter().enumerate() {
        t.check_dim(dim)?;
        for earlier in &targets[..i] {
            if earlier.from_index() == t.from_index() {
                return Err(Error::InvalidTarget(format!(
                    "source column {} appears in more than one target",
                    t.from_index()
                )));
            }
        }
    }
    Ok(())
}

/// Mean squared deviation of the evolved columns from their targets, summed
/// over rows, averaged over targets, and divided by the temperature.
///
/// For a single target with fidelity `f` this reduces to
/// `S * T = (1 - sqrt(f))^2 + (1 - f)`, so the action is a strictly
/// decreasing function of fidelity and vanishes only at `f = 1`.
pub fn action<T: Real>(
    u: &UnitaryMatrix<T>,
    targets: &[TransferTarget],
    temperature: T,
) -> Result<T> {
    if !(temperature > T::zero()) || !temperature.is_finite() {
        return Err(Error::InvalidTemperature(temperature.as_f64()));
    }
    validate_targets(u.dim(), targets)?;
    let dim = u.dim();
    let mut total = T::zero();
    for target in targets {
        for a in 0..dim {
            let magnitude = u
                .matrix()[(a, target.from_index())]
                .norm_sqr()
                .sqrt();
            let ideal = if a == target.to_index() { T::one() } else { T::zero() };
            let diff = ideal - magnitude;
            total += diff * diff;
        }
    }
    Ok(total / (temperature * T::of(targets.len() as f64)))
}

/// One minus the average transfer fidelity over the targets; the reported
/// quality metric, while [`action`] drives acceptance decisions.
pub fn mean_infidelity<T: Real>(u: &UnitaryMatrix<T>, targets: &[TransferTarget]) -> Result<T> {
    validate_targets(u.dim(), targets)?;
    let mut sum = T::zero();
    for target in targets {
        sum += u.amplitude(*target).norm_sqr();
    }
    Ok(T::one() - sum / T::of(targets.len() as f64))
}
