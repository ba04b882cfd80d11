//! Best transfer fidelity between every ordered pair of basis states of a
//! short cavity-emitter chain.

use serde::{Deserialize, Serialize};

use crate::anneal::{optimize, AnnealConfig, BoundsSpec, Objective};
use crate::error::{Error, Result};
use crate::evolve::TransferTarget;
use crate::model::{enumerate_basis, ModelKind, ModelParams, SymmetryConstraint};
use crate::scalar::Real;

use super::derive_seed;

/// One all-pairs experiment on the single-excitation sector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairMatrixConfig {
    pub n_sites: usize,
    /// Function calls granted to each optimization attempt.
    pub budget: usize,
    /// Constrain couplings to mirror symmetry about the chain center.
    pub symmetric: bool,
    /// Independent attempts per cell; the best fidelity is kept.
    pub runs_per_cell: usize,
    pub seed: u64,
}

/// Best fidelities for all ordered state pairs. Row = source state, column
/// = destination; diagonal cells optimize a return to the source at the
/// transfer time rather than a transfer, and are kept only for completeness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairMatrix<T: Real> {
    pub labels: Vec<String>,
    /// `self_symmetric[i]` marks states fixed by the mirror reflection.
    pub self_symmetric: Vec<bool>,
    pub best_fidelity: Vec<Vec<T>>,
    pub budget: usize,
    pub symmetric: bool,
    pub runs_per_cell: usize,
}

impl<T: Real> PairMatrix<T> {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Whether mirror-symmetric couplings cap the `(from, to)` fidelity at
    /// one half. A symmetric Hamiltonian conserves parity, so a transfer
    /// between a parity eigenstate (a self-symmetric basis state) and a
    /// state split evenly across both parity sectors can match at most the
    /// half living in the right sector.
    pub fn parity_capped(&self, from: usize, to: usize) -> bool {
        self.self_symmetric[from] != self.self_symmetric[to]
    }
}

/// Optimizes every ordered pair of single-excitation states and records the
/// best fidelity each cell reached within its budget.
pub fn pair_matrix_experiment<T: Real>(config: &PairMatrixConfig) -> Result<PairMatrix<T>> {
    if config.runs_per_cell == 0 {
        return Err(Error::InvalidConfig("runs_per_cell must be at least 1".into()));
    }
    let basis = enumerate_basis(ModelKind::Jch, config.n_sites, 1)?;
    let dim = basis.dim();
    let template = ModelParams::<T>::unit(ModelKind::Jch, config.n_sites)?;
    let symmetry = if config.symmetric {
        SymmetryConstraint::mirror(ModelKind::Jch, config.n_sites)
    } else {
        SymmetryConstraint::identity(template.tunable_len())
    };
    let anneal = AnnealConfig::dual(config.budget);

    let mirror = basis.mirror_permutation();
    let mut best_fidelity = vec![vec![T::zero(); dim]; dim];
    for from in 0..dim {
        for to in 0..dim {
            let target = if from == to {
                TransferTarget::returning(from)
            } else {
                TransferTarget::new(from, to)?
            };
            let objective = Objective::new(
                template.clone(),
                basis.clone(),
                vec![target],
                symmetry.clone(),
                BoundsSpec::Default,
                None,
                T::one(),
            )?;
            let cell = (from * dim + to) as u64;
            let mut best = T::zero();
            for run in 0..config.runs_per_cell {
                let seed = derive_seed(config.seed, cell, run as u64);
                let record = optimize(&objective, &anneal, seed)?;
                best = best.max(record.best_fidelity);
            }
            best_fidelity[from][to] = best;
        }
    }
    Ok(PairMatrix {
        labels: (0..dim).map(|i| basis.label(i)).collect(),
        self_symmetric: mirror.iter().enumerate().map(|(i, &j)| i == j).collect(),
        best_fidelity,
        budget: config.budget,
        symmetric: config.symmetric,
        runs_per_cell: config.runs_per_cell,
    })
}
