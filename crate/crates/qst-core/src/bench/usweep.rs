//! Peak transfer fidelity of a fixed impurity-chain coupling set over a
//! grid of on-site repulsion strengths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{fidelity_trace, spectral_decompose, TransferTarget};
use crate::model::{build_hamiltonian, enumerate_basis, ModelKind, ModelParams, PamParams};
use crate::scalar::Real;

/// Grid resolution and peak-search window for [`u_sweep`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct USweepConfig<T: Real> {
    /// Grid points per repulsion axis, at least 2. The grid always spans
    /// zero to three times the mean coupling magnitude.
    pub resolution: usize,
    /// Upper end of the time window searched for the fidelity peak.
    pub t_max: T,
    /// Initial sampling density of the peak search.
    pub coarse_points: usize,
}

/// Peak two-electron fidelities over the repulsion grid, one matrix per
/// requested transfer, indexed `[target][conduction][localized]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelitySurface<T: Real> {
    pub u_conduction: Vec<T>,
    pub u_localized: Vec<T>,
    pub target_labels: Vec<String>,
    pub peak_fidelity: Vec<Vec<Vec<T>>>,
}

impl<T: Real> FidelitySurface<T> {
    /// Largest fidelity away from the interaction-free corner, where the
    /// one-electron solution trivially reappears.
    pub fn best_nontrivial(&self, target: usize) -> T {
        let mut best = T::zero();
        for (i, row) in self.peak_fidelity[target].iter().enumerate() {
            for (j, &f) in row.iter().enumerate() {
                if i != 0 || j != 0 {
                    best = best.max(f);
                }
            }
        }
        best
    }
}

/// Sweeps both on-site repulsions of `params` from zero to three times its
/// mean coupling magnitude and records the peak fidelity of each requested
/// transfer in the one-up-one-down sector at every grid point. The hopping
/// and hybridization values stay fixed throughout; only the repulsions move.
pub fn u_sweep<T: Real>(
    params: &PamParams<T>,
    targets: &[TransferTarget],
    config: &USweepConfig<T>,
) -> Result<FidelitySurface<T>> {
    if config.resolution < 2 {
        return Err(Error::InvalidConfig(format!(
            "repulsion grid needs at least 2 points per axis, got {}",
            config.resolution
        )));
    }
    if targets.is_empty() {
        return Err(Error::InvalidTarget("no transfers requested".into()));
    }
    let basis = enumerate_basis(ModelKind::Pam, params.n_sites(), 2)?;
    for t in targets {
        t.check_dim(basis.dim())?;
    }
    let couplings = params.hoppings.iter().chain(&params.hybridizations);
    let mut mean = T::zero();
    let mut count = 0usize;
    for &c in couplings {
        mean += c.abs();
        count += 1;
    }
    mean /= T::of(count as f64);
    let u_max = T::of(3.0) * mean;
    let grid: Vec<T> = (0..config.resolution)
        .map(|i| u_max * T::of(i as f64) / T::of((config.resolution - 1) as f64))
        .collect();

    let mut peak_fidelity = vec![
        vec![vec![T::zero(); config.resolution]; config.resolution];
        targets.len()
    ];
    for (i, &uc) in grid.iter().enumerate() {
        for (j, &ud) in grid.iter().enumerate() {
            let point = ModelParams::Pam(PamParams::new(
                params.hoppings.clone(),
                params.hybridizations.clone(),
                uc,
                ud,
            )?);
            let spectral = spectral_decompose(&build_hamiltonian(&point, &basis)?)?;
            for (k, &target) in targets.iter().enumerate() {
                let trace =
                    fidelity_trace(&spectral, target, config.t_max, config.coarse_points)?;
                peak_fidelity[k][i][j] = trace.peak_fidelity();
            }
        }
    }
    Ok(FidelitySurface {
        u_conduction: grid.clone(),
        u_localized: grid,
        target_labels: targets
            .iter()
            .map(|t| format!("{} -> {}", basis.label(t.from_index()), basis.label(t.to_index())))
            .collect(),
        peak_fidelity,
    })
}
