//! Pairwise-sum spectra and overlap between a multi-excitation spectrum and
//! a reference combination set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Exchange statistics ruling which index pairs combine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParticleStatistics {
    /// Distinct levels only: sums over `a > b`, count `M(M-1)/2`.
    Fermionic,
    /// Double occupation allowed: sums over `a >= b`, count `M(M+1)/2`.
    Bosonic,
}

/// All two-particle energies built from one single-particle spectrum, sorted
/// ascending.
pub fn pairwise_sum_spectrum<T: Real>(
    single: &[T],
    statistics: ParticleStatistics,
) -> Result<Vec<T>> {
    if single.is_empty() {
        return Err(Error::NotEnoughData("pairwise sums need at least one level".into()));
    }
    let mut sums = Vec::with_capacity(single.len() * (single.len() + 1) / 2);
    for (a, &ea) in single.iter().enumerate() {
        let start = match statistics {
            ParticleStatistics::Fermionic => a + 1,
            ParticleStatistics::Bosonic => a,
        };
        for &eb in &single[start..] {
            sums.push(ea + eb);
        }
    }
    sums.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(sums)
}

/// How closely each value of one spectrum sits to some value of a reference
/// set, with the reference's own mean level spacing for scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport<T: Real> {
    /// Distance from each input eigenvalue to its nearest reference value,
    /// in input order.
    pub nearest_distances: Vec<T>,
    pub median_nearest: T,
    pub max_nearest: T,
    /// Mean consecutive spacing of the reference set; zero for a single
    /// reference value.
    pub mean_reference_spacing: T,
}

/// Matches every eigenvalue of `spectrum` against the nearest entry of the
/// sorted `reference` set.
pub fn spectrum_overlap<T: Real>(spectrum: &[T], reference: &[T]) -> Result<OverlapReport<T>> {
    if spectrum.is_empty() || reference.is_empty() {
        return Err(Error::NotEnoughData("overlap needs two nonempty spectra".into()));
    }
    let nearest_distances: Vec<T> = spectrum
        .iter()
        .map(|&x| {
            // binary search over the sorted reference, then check neighbours
            let idx = reference.partition_point(|&r| r < x);
            let mut best = T::max_value().expect("bounded scalar");
            for j in [idx.wrapping_sub(1), idx] {
                if let Some(&r) = reference.get(j) {
                    best = best.min((x - r).abs());
                }
            }
            best
        })
        .collect();
    let mut sorted = nearest_distances.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    let median_nearest = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / T::of(2.0)
    };
    let max_nearest = *sorted.last().expect("nonempty");
    let mean_reference_spacing = if reference.len() < 2 {
        T::zero()
    } else {
        (*reference.last().unwrap() - reference[0]) / T::of((reference.len() - 1) as f64)
    };
    Ok(OverlapReport { nearest_distances, median_nearest, max_nearest, mean_reference_spacing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::spectral_decompose;
    use crate::model::{build_hamiltonian, enumerate_basis, ModelKind, ModelParams, PamParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_level_examples_follow_the_counting_rules() {
        let single = [0.0, 1.0];
        assert_eq!(
            pairwise_sum_spectrum(&single, ParticleStatistics::Fermionic).unwrap(),
            vec![1.0]
        );
        assert_eq!(
            pairwise_sum_spectrum(&single, ParticleStatistics::Bosonic).unwrap(),
            vec![0.0, 1.0, 2.0]
        );
    }

    #[test]
    fn counts_match_the_combinatorial_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in [1usize, 2, 5, 12, 30] {
            let mut eigs: Vec<f64> = (0..m).map(|_| rng.gen_range(-4.0..4.0)).collect();
            eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let f = pairwise_sum_spectrum(&eigs, ParticleStatistics::Fermionic).unwrap();
            let b = pairwise_sum_spectrum(&eigs, ParticleStatistics::Bosonic).unwrap();
            assert_eq!(f.len(), m * (m - 1) / 2);
            assert_eq!(b.len(), m * (m + 1) / 2);
            assert!(f.windows(2).all(|w| w[0] <= w[1]));
            assert!(b.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn identical_spectra_overlap_exactly() {
        let eigs = [-2.0f64, -0.5, 0.5, 2.0];
        let report = spectrum_overlap(&eigs, &eigs).unwrap();
        assert!(report.nearest_distances.iter().all(|&d| d == 0.0));
        assert_eq!(report.median_nearest, 0.0);
        assert_eq!(report.max_nearest, 0.0);
        assert!((report.mean_reference_spacing - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn nearest_distances_pick_the_closer_neighbour() {
        let report = spectrum_overlap(&[0.4f64, 2.9], &[0.0, 1.0, 3.0]).unwrap();
        assert!((report.nearest_distances[0] - 0.4).abs() < 1e-15);
        assert!((report.nearest_distances[1] - 0.1).abs() < 1e-15);
        assert!((report.max_nearest - 0.4).abs() < 1e-15);
        assert!((report.median_nearest - 0.25).abs() < 1e-15);
    }

    #[test]
    fn noninteracting_two_electron_spectrum_factorizes_into_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 4;
        let params = ModelParams::Pam(
            PamParams::<f64>::new(
                (0..n - 1).map(|_| rng.gen_range(0.2..2.0)).collect(),
                (0..n).map(|_| rng.gen_range(0.2..2.0)).collect(),
                0.0,
                0.0,
            )
            .unwrap(),
        );
        let one = enumerate_basis(ModelKind::Pam, n, 1).unwrap();
        let two = enumerate_basis(ModelKind::Pam, n, 2).unwrap();
        let single = spectral_decompose(&build_hamiltonian(&params, &one).unwrap()).unwrap();
        let pair = spectral_decompose(&build_hamiltonian(&params, &two).unwrap()).unwrap();
        let sums =
            pairwise_sum_spectrum(single.eigenvalues(), ParticleStatistics::Bosonic).unwrap();
        let report = spectrum_overlap(pair.eigenvalues(), &sums).unwrap();
        assert!(report.max_nearest < 1e-9, "max distance {}", report.max_nearest);
    }

    #[test]
    fn resonant_two_photon_spectrum_counts_and_symmetry() {
        use crate::model::JchParams;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 6;
        let params = ModelParams::Jch(
            JchParams::<f64>::resonant(
                (0..n - 1).map(|_| rng.gen_range(0.3..3.0)).collect(),
                (0..n).map(|_| rng.gen_range(0.3..3.0)).collect(),
            )
            .unwrap(),
        );
        let one = enumerate_basis(ModelKind::Jch, n, 1).unwrap();
        let two = enumerate_basis(ModelKind::Jch, n, 2).unwrap();
        let single = spectral_decompose(&build_hamiltonian(&params, &one).unwrap()).unwrap();
        let pair = spectral_decompose(&build_hamiltonian(&params, &two).unwrap()).unwrap();
        assert_eq!(single.dim(), 12);
        assert_eq!(pair.dim(), 72);
        let sums =
            pairwise_sum_spectrum(single.eigenvalues(), ParticleStatistics::Bosonic).unwrap();
        assert_eq!(sums.len(), 78);

        // at shared resonance every eigenvalue has a negated partner
        let eigs = single.eigenvalues();
        let span = single.spectral_span();
        for (lo, hi) in eigs.iter().zip(eigs.iter().rev()) {
            assert!((lo + hi).abs() < 1e-9 * span.max(1.0));
        }
    }

    #[test]
    fn empty_inputs_are_rejected() {
        assert!(pairwise_sum_spectrum::<f64>(&[], ParticleStatistics::Bosonic).is_err());
        assert!(spectrum_overlap::<f64>(&[], &[1.0]).is_err());
        assert!(spectrum_overlap::<f64>(&[1.0], &[]).is_err());
    }
}
