//! Spectral structure of transfer Hamiltonians.
//!
//! Couplings that move an excitation across a chain with high fidelity leave
//! a fingerprint in the spectrum: consecutive level spacings cluster near a
//! common value, and many-excitation spectra decompose into sums over the
//! single-excitation levels when interactions are absent. This module
//! quantifies both effects.
//!
//! [`spacing_ratio_stats`] reduces a sorted spectrum to its spacing ratios,
//! successive-value ratios, and degeneracy pattern. [`pairwise_sum_spectrum`]
//! and [`spectrum_overlap`] test how closely a two-particle spectrum matches
//! the sums of a one-particle reference. [`compare_optimized_vs_random`]
//! contrasts the pooled spacing ratios of annealed coupling sets against
//! random draws from the same bounds.

mod compare;
mod stats;
mod sums;

pub use compare::{
    compare_optimized_vs_random, EnsembleRatios, RatioComparison, DEFAULT_UNITY_WINDOW,
};
pub use stats::{
    spacing_ratio_stats, Histogram, SpectrumStats, DEFAULT_RATIO_BINS, DEFAULT_RATIO_RANGE,
};
pub use sums::{pairwise_sum_spectrum, spectrum_overlap, OverlapReport, ParticleStatistics};
