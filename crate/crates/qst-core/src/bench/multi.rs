//! Fidelity cost of serving several transfers with one coupling set.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anneal::{optimize, AnnealConfig, BoundsSpec, Objective, RunRecord};
use crate::error::{Error, Result};
use crate::evolve::TransferTarget;
use crate::model::{enumerate_basis, ModelKind, ModelParams, SymmetryConstraint};
use crate::scalar::Real;

use super::derive_seed;

/// One multi-transfer study: for each target count in `targets_range`,
/// `n_runs` optimizations of randomly drawn mirror pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiTransferConfig {
    pub n_sites: usize,
    pub n_exc: usize,
    /// Inclusive range of simultaneous transfer counts.
    pub targets_range: (usize, usize),
    pub n_runs: usize,
    /// Function calls per run, shared by every target count.
    pub budget: usize,
    /// Sample points of the averaged error-versus-calls curves.
    pub curve_points: usize,
    pub seed: u64,
}

/// Aggregate of all runs at one target count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferCountResult<T: Real> {
    pub n_targets: usize,
    /// Largest final mean fidelity over the runs.
    pub best_mean_fidelity: T,
    /// `(calls, mean over runs of 1 - best mean fidelity so far)`.
    pub mean_error_curve: Vec<(usize, T)>,
    /// Mirror pairs drawn for each run, parallel to `records`.
    pub chosen_pairs: Vec<Vec<(usize, usize)>>,
    pub records: Vec<RunRecord<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiTransferSummary<T: Real> {
    /// All mirror pairs of the sector, self-symmetric states excluded.
    pub pool: Vec<(usize, usize)>,
    pub per_count: Vec<TransferCountResult<T>>,
}

/// Best-so-far mean fidelity of `record` after `calls` evaluations.
fn fidelity_at<T: Real>(record: &RunRecord<T>, calls: usize) -> T {
    let trace = &record.trace;
    let idx = trace.partition_point(|p| p.calls <= calls);
    if idx == 0 {
        T::zero()
    } else {
        trace[idx - 1].best_fidelity
    }
}

/// Log-spaced call-count grid ending exactly at `budget`.
fn curve_grid(budget: usize, points: usize) -> Vec<usize> {
    let lo = 10.0f64.min(budget as f64);
    let hi = budget as f64;
    let mut grid: Vec<usize> = (0..points)
        .map(|i| {
            let f = i as f64 / (points - 1).max(1) as f64;
            (lo * (hi / lo).powf(f)).round() as usize
        })
        .collect();
    grid.dedup();
    grid
}

/// Runs the multi-transfer study on the two-excitation mirror-pair pool.
///
/// Each run draws its own transfer set: `n_targets` distinct mirror pairs,
/// uniformly without replacement, seeded per run. The optimization error is
/// normalized by the number of targets, so curves for different counts are
/// comparable as one minus the average fidelity.
pub fn multi_transfer_experiment<T: Real>(
    config: &MultiTransferConfig,
) -> Result<MultiTransferSummary<T>> {
    let (lo, hi) = config.targets_range;
    if lo == 0 || hi < lo {
        return Err(Error::InvalidConfig(format!(
            "target count range {lo}..={hi} is empty or starts at zero"
        )));
    }
    if config.n_runs == 0 || config.curve_points < 2 {
        return Err(Error::InvalidConfig(
            "need at least one run and two curve points".into(),
        ));
    }
    let basis = enumerate_basis(ModelKind::Jch, config.n_sites, config.n_exc)?;
    let pool = basis.mirror_pairs();
    if hi > pool.len() {
        return Err(Error::InvalidConfig(format!(
            "{hi} target transfers requested but only {} mirror pairs exist",
            pool.len()
        )));
    }
    let template = ModelParams::<T>::unit(ModelKind::Jch, config.n_sites)?;
    let anneal = AnnealConfig::dual(config.budget);
    let grid = curve_grid(config.budget, config.curve_points);

    let mut per_count = Vec::new();
    for n_targets in lo..=hi {
        let runs: Vec<(Vec<(usize, usize)>, RunRecord<T>)> = (0..config.n_runs)
            .into_par_iter()
            .map(|run| {
                let seed = derive_seed(config.seed, n_targets as u64, run as u64);
                // draw this run's transfer set from a stream decoupled from
                // the optimizer's
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bf0_3635);
                let mut deck = pool.clone();
                let (sample, _) = deck.partial_shuffle(&mut rng, n_targets);
                let pairs: Vec<(usize, usize)> = sample.to_vec();
                let targets: Result<Vec<TransferTarget>> = pairs
                    .iter()
                    .map(|&(a, b)| TransferTarget::new(a, b))
                    .collect();
                let objective = Objective::new(
                    template.clone(),
                    basis.clone(),
                    targets?,
                    SymmetryConstraint::identity(template.tunable_len()),
                    BoundsSpec::Default,
                    None,
                    T::one(),
                )?;
                let record = optimize(&objective, &anneal, seed)?;
                Ok((pairs, record))
            })
            .collect::<Result<_>>()?;

        let best_mean_fidelity = runs
            .iter()
            .map(|(_, r)| r.best_fidelity)
            .fold(T::zero(), |a, b| a.max(b));
        let inv_runs = T::one() / T::of(config.n_runs as f64);
        let mean_error_curve = grid
            .iter()
            .map(|&calls| {
                let mean_err = runs
                    .iter()
                    .map(|(_, r)| T::one() - fidelity_at(r, calls))
                    .fold(T::zero(), |a, e| a + e)
                    * inv_runs;
                (calls, mean_err)
            })
            .collect();
        let (chosen_pairs, records) = runs.into_iter().unzip();
        per_count.push(TransferCountResult {
            n_targets,
            best_mean_fidelity,
            mean_error_curve,
            chosen_pairs,
            records,
        });
    }
    Ok(MultiTransferSummary { pool, per_count })
}
