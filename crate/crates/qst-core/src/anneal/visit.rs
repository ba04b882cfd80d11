//! Generalized Cauchy-Lorentz visiting distribution.
//!
//! Proposal steps follow the Tsallis visiting distribution used by
//! generalized simulated annealing: a Gaussian numerator scaled by a
//! temperature- and shape-dependent width, divided by a fractional power of a
//! second Gaussian's magnitude. For shape `q -> 1` it approaches a Gaussian;
//! at the default `q = 2.62` it is heavy-tailed, so jumps spanning the whole
//! search box keep nonzero probability at any temperature.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default distribution shape; the widely adopted generalized-annealing value.
pub const DEFAULT_VISIT_SHAPE: f64 = 2.62;

/// Steps beyond this magnitude are folded back to a uniformly scaled tail
/// sample to avoid overflowing the bound wrap.
const TAIL_LIMIT: f64 = 1e8;

/// Proposals landing within this distance of the lower bound are nudged off
/// it, keeping degenerate pile-up at the boundary out of the chain.
const MIN_VISIT_BOUND: f64 = 1e-10;

/// Sampler for visiting-distribution steps at a given shape `q`.
#[derive(Clone, Debug)]
pub(crate) struct VisitingDistribution<T: Real> {
    q: T,
    factor4_p: T,
    factor6: T,
}

impl<T: Real> VisitingDistribution<T> {
    pub(crate) fn new(q: T) -> Result<Self> {
        let one = T::one();
        let three = T::of(3.0);
        if !(q > one && q < three) {
            return Err(Error::InvalidConfig(format!(
                "visiting shape must lie in (1, 3), got {}",
                q.as_f64()
            )));
        }
        let qm1 = q - one;
        let factor2 = ((T::of(4.0) - q) * qm1.ln()).exp();
        let factor3 = ((T::of(2.0) - q) * T::of(2.0).ln() / qm1).exp();
        let factor4_p = T::pi().sqrt() * factor2 / (factor3 * (three - q));
        let factor5 = one / qm1 - T::of(0.5);
        let d1 = T::of(2.0) - factor5;
        let factor6 = T::pi() * (one - factor5) / (T::pi() * (one - factor5)).sin()
            / T::of(libm::lgamma(d1.as_f64())).exp();
        Ok(Self { q, factor4_p, factor6 })
    }

    /// Draws one step at the given visiting temperature.
    pub(crate) fn sample_step<R: Rng + ?Sized>(&self, visit_temp: T, rng: &mut R) -> T {
        let qm1 = self.q - T::one();
        let width_exponent = qm1 / (T::of(3.0) - self.q);
        // width of the Gaussian numerator at this temperature
        let factor1 = (visit_temp.ln() / qm1).exp();
        let factor4 = self.factor4_p * factor1;
        let sigma = (-width_exponent * (self.factor6 / factor4).ln()).exp();
        let x = T::std_normal(rng) * sigma;
        let y = T::std_normal(rng);
        let den = (width_exponent * y.abs().ln()).exp();
        let step = x / den;
        let tail = T::of(TAIL_LIMIT);
        if step > tail {
            tail * T::unit_uniform(rng)
        } else if step < -tail {
            -tail * T::unit_uniform(rng)
        } else {
            step
        }
    }
}

/// Folds a proposal into `[lo, hi]` periodically, then nudges it off an exact
/// lower-bound landing.
pub(crate) fn wrap_into_bounds<T: Real>(x: T, lo: T, hi: T) -> T {
    let range = hi - lo;
    let mut w = (x - lo) % range;
    if w < T::zero() {
        w += range;
    }
    let mut out = lo + w;
    if (out - lo).abs() < T::of(MIN_VISIT_BOUND) {
        out += T::of(MIN_VISIT_BOUND);
    }
    out
}

/// Folds a proposal into `[lo, hi]` by reflecting at the walls.
pub(crate) fn reflect_into_bounds<T: Real>(x: T, lo: T, hi: T) -> T {
    let range = hi - lo;
    let period = range + range;
    let mut w = (x - lo) % period;
    if w < T::zero() {
        w += period;
    }
    if w > range {
        w = period - w;
    }
    lo + w
}

/// Proposes a new value for one parameter: current value plus a
/// visiting-distribution step at `visit_temp` (shape [`DEFAULT_VISIT_SHAPE`]),
/// folded into `[lo, hi]`.
pub fn cauchy_perturb<T: Real, R: Rng + ?Sized>(
    value: T,
    visit_temp: T,
    bound: (T, T),
    rng: &mut R,
) -> Result<T> {
    let (lo, hi) = bound;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidBounds(format!(
            "need finite lo < hi, got [{}, {}]",
            lo.as_f64(),
            hi.as_f64()
        )));
    }
    if !(visit_temp > T::zero()) {
        return Err(Error::InvalidTemperature(visit_temp.as_f64()));
    }
    let dist = VisitingDistribution::new(T::of(DEFAULT_VISIT_SHAPE))?;
    Ok(wrap_into_bounds(value + dist.sample_step(visit_temp, rng), lo, hi))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn sorted_abs_steps(temp: f64, n: usize, seed: u64) -> Vec<f64> {
        let dist = VisitingDistribution::<f64>::new(DEFAULT_VISIT_SHAPE).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut steps: Vec<f64> =
            (0..n).map(|_| dist.sample_step(temp, &mut rng).abs()).collect();
        steps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        steps
    }

    #[test]
    fn step_scale_shrinks_with_the_visiting_temperature() {
        let hot = sorted_abs_steps(5230.0, 4001, 1);
        let cold = sorted_abs_steps(1e-6, 4001, 2);
        let median = |s: &[f64]| s[s.len() / 2];
        assert!(median(&cold) < 1e-3 * median(&hot));
    }

    #[test]
    fn tails_are_heavier_than_a_gaussian_with_matched_quartiles() {
        // cold enough that typical steps are far below the half-range, so the
        // tail weight alone decides the comparison
        let steps = sorted_abs_steps(0.01, 20_001, 3);
        let half_range = 25.0;
        // for a centered symmetric law the interquartile range of the signed
        // step is twice the median absolute value
        let sigma_gauss = 2.0 * steps[steps.len() / 2] / 1.349;
        let gauss_tail = libm::erfc(half_range / (sigma_gauss * std::f64::consts::SQRT_2));
        let empirical_tail =
            steps.iter().filter(|s| **s > half_range).count() as f64 / steps.len() as f64;
        assert!(
            empirical_tail > gauss_tail,
            "empirical {empirical_tail} vs gaussian {gauss_tail}"
        );
        // full-box jumps keep happening even at this temperature
        assert!(empirical_tail > 1e-3);
    }

    #[test]
    fn proposals_stay_inside_the_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (lo, hi) = (0.0, 50.0);
        let mut value = 25.0;
        for _ in 0..5000 {
            value = cauchy_perturb(value, 37.0, (lo, hi), &mut rng).unwrap();
            assert!(value > lo && value <= hi, "{value}");
        }
    }

    #[test]
    fn degenerate_bounds_and_temperatures_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(cauchy_perturb(1.0, 1.0, (2.0, 2.0), &mut rng).is_err());
        assert!(cauchy_perturb(1.0, 1.0, (3.0, 2.0), &mut rng).is_err());
        assert!(cauchy_perturb(1.0, 0.0, (0.0, 2.0), &mut rng).is_err());
        assert!(VisitingDistribution::<f64>::new(1.0).is_err());
        assert!(VisitingDistribution::<f64>::new(3.0).is_err());
    }

    #[test]
    fn folding_helpers_cover_both_conventions() {
        // periodic wrap
        assert!((wrap_into_bounds(7.5f64, 0.0, 5.0) - 2.5).abs() < 1e-12);
        assert!((wrap_into_bounds(-1.0f64, 0.0, 5.0) - 4.0).abs() < 1e-12);
        let nudged = wrap_into_bounds(5.0f64, 0.0, 5.0);
        assert!(nudged > 0.0 && nudged < 5.0);
        // reflection
        assert!((reflect_into_bounds(6.0f64, 0.0, 5.0) - 4.0).abs() < 1e-12);
        assert!((reflect_into_bounds(-1.5f64, 0.0, 5.0) - 1.5).abs() < 1e-12);
        assert!((reflect_into_bounds(11.0f64, 0.0, 5.0) - 1.0).abs() < 1e-12);
        assert!((reflect_into_bounds(3.0f64, 0.0, 5.0) - 3.0).abs() < 1e-12);
    }
}
