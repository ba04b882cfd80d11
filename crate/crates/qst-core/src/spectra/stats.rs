//! Spacing and ratio statistics of a sorted spectrum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default histogram range and resolution for spacing ratios.
pub const DEFAULT_RATIO_BINS: usize = 40;
pub const DEFAULT_RATIO_RANGE: (f64, f64) = (0.0, 4.0);

/// Fixed-width counting histogram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram<T: Real> {
    /// Bin edges, length one more than `counts`.
    pub edges: Vec<T>,
    pub counts: Vec<usize>,
    /// Samples falling outside the edge range.
    pub outside: usize,
}

impl<T: Real> Histogram<T> {
    /// Counts `samples` into `bins` equal-width bins spanning `[lo, hi)`.
    pub fn count(samples: &[T], lo: T, hi: T, bins: usize) -> Result<Self> {
        if bins == 0 || !(lo < hi) {
            return Err(Error::InvalidConfig(format!(
                "histogram needs bins > 0 and lo < hi, got {} bins over [{}, {}]",
                bins,
                lo.as_f64(),
                hi.as_f64()
            )));
        }
        let width = (hi - lo) / T::of(bins as f64);
        let edges = (0..=bins).map(|i| lo + width * T::of(i as f64)).collect();
        let mut counts = vec![0usize; bins];
        let mut outside = 0usize;
        for &x in samples {
            if x >= lo && x < hi {
                let mut idx = ((x - lo) / width).as_f64() as usize;
                idx = idx.min(bins - 1);
                counts[idx] += 1;
            } else {
                outside += 1;
            }
        }
        Ok(Self { edges, counts, outside })
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum::<usize>() + self.outside
    }
}

/// Level statistics of one spectrum: consecutive spacings, spacing ratios,
/// successive-value ratios, and degeneracy bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumStats<T: Real> {
    /// The input eigenvalues, ascending.
    pub eigenvalues: Vec<T>,
    /// Consecutive differences, all nonnegative; near-degenerate pairs
    /// contribute explicit (tiny) entries here.
    pub spacings: Vec<T>,
    /// `s_{k+1} / s_k` for every `k` whose denominator is resolvably
    /// nonzero; degenerate spacings never enter a denominator.
    pub spacing_ratios: Vec<T>,
    /// `e_{k+1} / e_k` for every `k` with `e_k` resolvably nonzero.
    pub successive_value_ratios: Vec<T>,
    /// Distinct values occurring more than once, with multiplicities.
    pub degeneracies: Vec<(T, usize)>,
    /// Spacing-ratio histogram over the default range.
    pub histogram: Histogram<T>,
}

/// Resolution below which two levels count as degenerate: relative to the
/// spectral span, at a few hundred ulps.
fn degeneracy_tolerance<T: Real>(eigs: &[T]) -> T {
    let span = *eigs.last().unwrap() - eigs[0];
    span.max(T::one()) * T::of(1e-12)
}

/// Computes [`SpectrumStats`] for a sorted spectrum of at least three levels.
pub fn spacing_ratio_stats<T: Real>(eigs: &[T]) -> Result<SpectrumStats<T>> {
    if eigs.len() < 3 {
        return Err(Error::NotEnoughData(format!(
            "ratio statistics need at least 3 eigenvalues, got {}",
            eigs.len()
        )));
    }
    if eigs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidConfig("eigenvalues must be sorted ascending".into()));
    }
    let tol = degeneracy_tolerance(eigs);
    let spacings: Vec<T> = eigs.windows(2).map(|w| w[1] - w[0]).collect();
    let spacing_ratios: Vec<T> = spacings
        .windows(2)
        .filter(|w| w[0] > tol)
        .map(|w| w[1] / w[0])
        .collect();
    let successive_value_ratios: Vec<T> = eigs
        .windows(2)
        .filter(|w| w[0].abs() > tol)
        .map(|w| w[1] / w[0])
        .collect();

    let mut degeneracies: Vec<(T, usize)> = Vec::new();
    let mut run_start = 0usize;
    for i in 1..=eigs.len() {
        if i == eigs.len() || eigs[i] - eigs[run_start] > tol {
            if i - run_start > 1 {
                degeneracies.push((eigs[run_start], i - run_start));
            }
            run_start = i;
        }
    }

    let histogram = Histogram::count(
        &spacing_ratios,
        T::of(DEFAULT_RATIO_RANGE.0),
        T::of(DEFAULT_RATIO_RANGE.1),
        DEFAULT_RATIO_BINS,
    )?;
    Ok(SpectrumStats {
        eigenvalues: eigs.to_vec(),
        spacings,
        spacing_ratios,
        successive_value_ratios,
        degeneracies,
        histogram,
    })
}
