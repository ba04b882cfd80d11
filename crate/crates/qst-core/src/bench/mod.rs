//! Benchmark experiments for the annealing optimizer.
//!
//! Each experiment reproduces one study at configurable scale: how the
//! number of function calls to reach fidelity thresholds grows with chain
//! length ([`convergence_benchmark`] plus [`fit_exponential`]), which of the
//! state pairs of a short chain admit high-fidelity transfer with and
//! without mirror-symmetric couplings ([`pair_matrix_experiment`]), how
//! on-site repulsion degrades a non-interacting impurity-chain solution
//! ([`u_sweep`]), and how fidelity falls as one coupling set is asked to
//! serve several transfers at once ([`multi_transfer_experiment`]).
//!
//! Experiments return plain data; persistence and table formatting belong
//! to the caller. Every summary is recomputable from the run records it
//! carries.

mod convergence;
mod multi;
mod pairs;
mod usweep;

pub use convergence::{
    convergence_benchmark, fit_exponential, summarize_runs, BudgetRule, ConvergenceConfig,
    ConvergenceSummary, ExpFit, ParityMedians, SizeSummary, ThresholdSummary,
    SINGLE_EXCITATION_BASELINE_PREFACTORS, TWO_EXCITATION_BASELINE_PREFACTORS,
};
pub use multi::{multi_transfer_experiment, MultiTransferConfig, MultiTransferSummary, TransferCountResult};
pub use pairs::{pair_matrix_experiment, PairMatrix, PairMatrixConfig};
pub use usweep::{u_sweep, FidelitySurface, USweepConfig};

use crate::anneal::{BoundsSpec, Objective, PamPenalty};
use crate::error::{Error, Result};
use crate::evolve::TransferTarget;
use crate::model::{enumerate_basis, ModelKind, ModelParams, SymmetryConstraint};
use crate::scalar::Real;

/// Objective for the benchmark protocol: all excitations stacked on the
/// leftmost top-row site transferring to the rightmost at `t = 1`, starting
/// from the all-ones template, optionally with mirror-symmetric couplings.
pub fn transfer_objective<T: Real>(
    kind: ModelKind,
    n_sites: usize,
    n_exc: usize,
    symmetric: bool,
    penalty: Option<PamPenalty<T>>,
) -> Result<Objective<T>> {
    let template = ModelParams::unit(kind, n_sites)?;
    let basis = enumerate_basis(kind, n_sites, n_exc)?;
    let corner = |site: usize| {
        basis.stacked_state(site).ok_or_else(|| {
            Error::InvalidTarget(format!("no stacked state at site {site}"))
        })
    };
    let targets = vec![TransferTarget::new(corner(0)?, corner(n_sites - 1)?)?];
    let symmetry = if symmetric {
        SymmetryConstraint::mirror(kind, n_sites)
    } else {
        SymmetryConstraint::identity(template.tunable_len())
    };
    Objective::new(template, basis, targets, symmetry, BoundsSpec::Default, penalty, T::one())
}

/// Splits one experiment seed into independent per-cell streams.
pub(crate) fn derive_seed(seed: u64, lane: u64, index: u64) -> u64 {
    // SplitMix64 finalizer over a lane-tagged counter
    let mut z = seed
        .wrapping_add(lane.wrapping_mul(0xbf58_476d_1ce4_e5b9))
        .wrapping_add(index.wrapping_mul(0x94d0_49bb_1331_11eb));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
