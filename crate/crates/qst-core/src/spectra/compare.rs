//! Spacing-ratio comparison between transfer-optimized couplings and random
//! draws from the same parameter box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::anneal::{optimize, AnnealConfig, Objective};
use crate::error::{Error, Result};
use crate::evolve::spectral_decompose;
use crate::model::build_hamiltonian;
use crate::scalar::Real;

use super::stats::{Histogram, DEFAULT_RATIO_BINS, DEFAULT_RATIO_RANGE};

/// Default half-width of the near-unity window for spacing ratios.
pub const DEFAULT_UNITY_WINDOW: f64 = 0.05;

/// Pooled spacing ratios of one ensemble of spectra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRatios<T: Real> {
    /// Spacing ratios pooled over every sample in the ensemble.
    pub ratios: Vec<T>,
    pub histogram: Histogram<T>,
    /// Count of ratios inside `[1 - epsilon, 1 + epsilon]`.
    pub near_unity: usize,
    pub fraction_near_unity: T,
}

impl<T: Real> EnsembleRatios<T> {
    fn from_ratios(ratios: Vec<T>, epsilon: T) -> Result<Self> {
        let lo = T::one() - epsilon;
        let hi = T::one() + epsilon;
        let near_unity = ratios.iter().filter(|&&r| r >= lo && r <= hi).count();
        let fraction_near_unity = if ratios.is_empty() {
            T::zero()
        } else {
            T::of(near_unity as f64) / T::of(ratios.len() as f64)
        };
        let histogram = Histogram::count(
            &ratios,
            T::of(DEFAULT_RATIO_RANGE.0),
            T::of(DEFAULT_RATIO_RANGE.1),
            DEFAULT_RATIO_BINS,
        )?;
        Ok(Self { ratios, histogram, near_unity, fraction_near_unity })
    }
}

/// Side-by-side level statistics of optimized versus random couplings, with
/// a two-proportion test on the fraction of near-unity spacing ratios.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioComparison<T: Real> {
    pub optimized: EnsembleRatios<T>,
    pub random: EnsembleRatios<T>,
    pub epsilon: T,
    /// Two-proportion z statistic for the near-unity fractions.
    pub z_statistic: f64,
    /// Two-sided p-value of `z_statistic` under the null of equal fractions.
    pub p_value: f64,
}

/// Two-sided two-proportion z-test; returns (z, p).
fn two_proportion_test(x1: usize, n1: usize, x2: usize, n2: usize) -> (f64, f64) {
    if n1 == 0 || n2 == 0 {
        return (0.0, 1.0);
    }
    let (x1, n1, x2, n2) = (x1 as f64, n1 as f64, x2 as f64, n2 as f64);
    let pooled = (x1 + x2) / (n1 + n2);
    let variance = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2);
    if variance <= 0.0 {
        return (0.0, 1.0);
    }
    let z = (x1 / n1 - x2 / n2) / variance.sqrt();
    let p = libm::erfc(z.abs() / std::f64::consts::SQRT_2);
    (z, p)
}

/// Spacing ratios of the spectrum generated by one free-parameter vector.
fn ratios_of<T: Real>(objective: &Objective<T>, free: &[T]) -> Result<Vec<T>> {
    let params = objective.params_for(free)?;
    let h = build_hamiltonian(&params, objective.basis())?;
    let spectral = spectral_decompose(&h)?;
    Ok(super::stats::spacing_ratio_stats(spectral.eigenvalues())?.spacing_ratios)
}

/// Optimizes `n_samples` independently seeded runs of `objective`, draws as
/// many random parameter vectors from the same bounds, and compares the
/// pooled spacing-ratio statistics of the two ensembles with window
/// `epsilon` around unity.
pub fn compare_optimized_vs_random<T: Real>(
    objective: &Objective<T>,
    config: &AnnealConfig<T>,
    n_samples: usize,
    epsilon: T,
    seed: u64,
) -> Result<RatioComparison<T>> {
    if n_samples < 2 {
        return Err(Error::NotEnoughData(format!(
            "ensemble comparison needs at least 2 samples, got {n_samples}"
        )));
    }
    if !(epsilon > T::zero()) || !epsilon.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "near-unity window must be positive, got {}",
            epsilon.as_f64()
        )));
    }
    let mut optimized_ratios = Vec::new();
    for i in 0..n_samples {
        let record = optimize(objective, config, seed.wrapping_add(i as u64))?;
        optimized_ratios.extend(ratios_of(objective, &record.best_free_params)?);
    }
    // decorrelate the baseline stream from the run seeds
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut random_ratios = Vec::new();
    let mut free = vec![T::zero(); objective.n_free()];
    for _ in 0..n_samples {
        for (v, &(lo, hi)) in free.iter_mut().zip(objective.bounds()) {
            *v = rng.gen_range(lo..hi);
        }
        random_ratios.extend(ratios_of(objective, &free)?);
    }
    let optimized = EnsembleRatios::from_ratios(optimized_ratios, epsilon)?;
    let random = EnsembleRatios::from_ratios(random_ratios, epsilon)?;
    let (z_statistic, p_value) = two_proportion_test(
        optimized.near_unity,
        optimized.ratios.len(),
        random.near_unity,
        random.ratios.len(),
    );
    Ok(RatioComparison { optimized, random, epsilon, z_statistic, p_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anneal::BoundsSpec;
    use crate::evolve::TransferTarget;
    use crate::model::{
        enumerate_basis, CavityParams, ModelKind, ModelParams, SymmetryConstraint,
    };

    fn cavity_objective(n: usize) -> Objective<f64> {
        let template =
            ModelParams::CavityOnly(CavityParams::resonant(vec![1.0; n - 1]).unwrap());
        let basis = enumerate_basis(ModelKind::CavityOnly, n, 1).unwrap();
        Objective::new(
            template,
            basis,
            vec![TransferTarget::new(0, n - 1).unwrap()],
            SymmetryConstraint::identity(n - 1),
            BoundsSpec::Uniform { lo: 0.0, hi: 10.0 },
            None,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn optimized_chains_have_more_near_unity_ratios_than_random_ones() {
        let obj = cavity_objective(4);
        let config = AnnealConfig::dual(20_000);
        let report = compare_optimized_vs_random(&obj, &config, 8, 0.05, 77).unwrap();
        assert!(
            report.optimized.fraction_near_unity > report.random.fraction_near_unity,
            "optimized {} vs random {}",
            report.optimized.fraction_near_unity,
            report.random.fraction_near_unity
        );
    }

    #[test]
    fn matched_random_ensembles_are_statistically_indistinguishable() {
        // both ensembles random: a budget of one call leaves the optimizer
        // at its random starting point
        let obj = cavity_objective(5);
        let config = AnnealConfig::dual(1);
        let report = compare_optimized_vs_random(&obj, &config, 30, 0.05, 123).unwrap();
        assert!(report.p_value > 0.01, "p = {}", report.p_value);
    }

    #[test]
    fn tiny_ensembles_are_rejected() {
        let obj = cavity_objective(4);
        let config = AnnealConfig::dual(10);
        assert!(compare_optimized_vs_random(&obj, &config, 0, 0.05, 1).is_err());
        assert!(compare_optimized_vs_random(&obj, &config, 1, 0.05, 1).is_err());
        assert!(compare_optimized_vs_random(&obj, &config, 4, 0.0, 1).is_err());
    }

    #[test]
    fn proportion_test_matches_a_hand_computed_case() {
        // 30/100 vs 20/100: pooled 0.25, z = 0.1 / sqrt(0.25*0.75*0.02)
        let (z, p) = two_proportion_test(30, 100, 20, 100);
        assert!((z - 0.1 / (0.25f64 * 0.75 * 0.02).sqrt()).abs() < 1e-12);
        assert!((p - libm::erfc(z / std::f64::consts::SQRT_2)).abs() < 1e-15);
        let (z0, p0) = two_proportion_test(0, 50, 0, 70);
        assert_eq!((z0, p0), (0.0, 1.0));
    }
}
