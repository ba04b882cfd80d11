//! Coupling parameter sets for the lattice models.
//!
//! Each set splits into tunables (the couplings an optimizer may move) and
//! fixed mode energies. Sector Hamiltonians are linear in all of them, which
//! [`super::HamiltonianStructure`] exploits; the flat slot layout is
//! `[tunables.., fixed energies..]` in the field order documented per struct.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::basis::ModelKind;

/// Bare cavity chain. Tunables: `hoppings` (length `n - 1`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CavityParams<T> {
    /// On-site photon energies, length `n`. Fixed during optimization.
    pub site_energies: Vec<T>,
    /// Nearest-neighbour photon hopping `J_i` between sites `i` and `i + 1`.
    pub hoppings: Vec<T>,
}

/// Cavity-emitter chain. Tunables: `hoppings` then `couplings`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JchParams<T> {
    /// Cavity photon energies, length `n`. Fixed during optimization.
    pub cavity_energies: Vec<T>,
    /// Emitter excitation energies, length `n`. Fixed during optimization.
    pub emitter_energies: Vec<T>,
    /// Photon hopping `J_i`, length `n - 1`.
    pub hoppings: Vec<T>,
    /// On-site cavity-emitter exchange `g_i`, length `n`.
    pub couplings: Vec<T>,
}

/// Two-band impurity chain. Everything is tunable: `hoppings`, then
/// `hybridizations`, then the two interaction strengths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PamParams<T> {
    /// Conduction hopping `t_i` (enters the Hamiltonian as `-t_i`), length `n - 1`.
    pub hoppings: Vec<T>,
    /// On-site hybridization `v_i` between the bands, length `n`.
    pub hybridizations: Vec<T>,
    /// Conduction-band double-occupancy repulsion.
    pub u_conduction: T,
    /// Localized-band double-occupancy repulsion.
    pub u_localized: T,
}

/// Parameter set tagged by model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelParams<T> {
    CavityOnly(CavityParams<T>),
    Jch(JchParams<T>),
    Pam(PamParams<T>),
}

fn ensure_finite<T: Real>(what: &str, values: &[T]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::ParamMismatch(format!("{what} contains a non-finite value")));
    }
    Ok(())
}

fn ensure_len<T>(what: &str, values: &[T], expect: usize) -> Result<()> {
    if values.len() != expect {
        return Err(Error::ParamMismatch(format!(
            "{what} has length {}, expected {expect}",
            values.len()
        )));
    }
    Ok(())
}

impl<T: Real> CavityParams<T> {
    pub fn new(site_energies: Vec<T>, hoppings: Vec<T>) -> Result<Self> {
        let p = Self { site_energies, hoppings };
        p.validate()?;
        Ok(p)
    }

    /// All site energies zero.
    pub fn resonant(hoppings: Vec<T>) -> Result<Self> {
        let n = hoppings.len() + 1;
        Self::new(vec![T::zero(); n], hoppings)
    }

    pub fn n_sites(&self) -> usize {
        self.site_energies.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_sites();
        if n < 2 {
            return Err(Error::ChainTooShort(n));
        }
        ensure_len("hoppings", &self.hoppings, n - 1)?;
        ensure_finite("site_energies", &self.site_energies)?;
        ensure_finite("hoppings", &self.hoppings)
    }
}

impl<T: Real> JchParams<T> {
    pub fn new(
        cavity_energies: Vec<T>,
        emitter_energies: Vec<T>,
        hoppings: Vec<T>,
        couplings: Vec<T>,
    ) -> Result<Self> {
        let p = Self { cavity_energies, emitter_energies, hoppings, couplings };
        p.validate()?;
        Ok(p)
    }

    /// All mode energies zero: cavities and emitters on shared resonance.
    pub fn resonant(hoppings: Vec<T>, couplings: Vec<T>) -> Result<Self> {
        let n = couplings.len();
        Self::new(vec![T::zero(); n], vec![T::zero(); n], hoppings, couplings)
    }

    pub fn n_sites(&self) -> usize {
        self.couplings.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_sites();
        if n < 2 {
            return Err(Error::ChainTooShort(n));
        }
        ensure_len("cavity_energies", &self.cavity_energies, n)?;
        ensure_len("emitter_energies", &self.emitter_energies, n)?;
        ensure_len("hoppings", &self.hoppings, n - 1)?;
        ensure_finite("cavity_energies", &self.cavity_energies)?;
        ensure_finite("emitter_energies", &self.emitter_energies)?;
        ensure_finite("hoppings", &self.hoppings)?;
        ensure_finite("couplings", &self.couplings)
    }
}

impl<T: Real> PamParams<T> {
    pub fn new(hoppings: Vec<T>, hybridizations: Vec<T>, u_conduction: T, u_localized: T) -> Result<Self> {
        let p = Self { hoppings, hybridizations, u_conduction, u_localized };
        p.validate()?;
        Ok(p)
    }

    pub fn n_sites(&self) -> usize {
        self.hybridizations.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_sites();
        if n < 2 {
            return Err(Error::ChainTooShort(n));
        }
        ensure_len("hoppings", &self.hoppings, n - 1)?;
        ensure_finite("hoppings", &self.hoppings)?;
        ensure_finite("hybridizations", &self.hybridizations)?;
        ensure_finite("interactions", &[self.u_conduction, self.u_localized])
    }
}

/// Number of tunable parameters for `kind` on `n` sites.
pub(crate) fn tunable_len(kind: ModelKind, n: usize) -> usize {
    match kind {
        ModelKind::CavityOnly => n - 1,
        ModelKind::Jch => 2 * n - 1,
        ModelKind::Pam => 2 * n + 1,
    }
}

impl<T: Real> ModelParams<T> {
    /// Resonant template with every tunable coupling set to one, the
    /// customary starting point for annealing runs.
    pub fn unit(kind: ModelKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::ChainTooShort(n));
        }
        let ones = |k: usize| vec![T::one(); k];
        Ok(match kind {
            ModelKind::CavityOnly => ModelParams::CavityOnly(CavityParams::resonant(ones(n - 1))?),
            ModelKind::Jch => ModelParams::Jch(JchParams::resonant(ones(n - 1), ones(n))?),
            ModelKind::Pam => {
                ModelParams::Pam(PamParams::new(ones(n - 1), ones(n), T::one(), T::one())?)
            }
        })
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::CavityOnly(_) => ModelKind::CavityOnly,
            ModelParams::Jch(_) => ModelKind::Jch,
            ModelParams::Pam(_) => ModelKind::Pam,
        }
    }

    pub fn n_sites(&self) -> usize {
        match self {
            ModelParams::CavityOnly(p) => p.n_sites(),
            ModelParams::Jch(p) => p.n_sites(),
            ModelParams::Pam(p) => p.n_sites(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::CavityOnly(p) => p.validate(),
            ModelParams::Jch(p) => p.validate(),
            ModelParams::Pam(p) => p.validate(),
        }
    }

    pub fn tunable_len(&self) -> usize {
        tunable_len(self.kind(), self.n_sites())
    }

    /// Flat tunable vector, in the slot order documented on each struct.
    pub fn tunables(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.tunable_len());
        match self {
            ModelParams::CavityOnly(p) => out.extend_from_slice(&p.hoppings),
            ModelParams::Jch(p) => {
                out.extend_from_slice(&p.hoppings);
                out.extend_from_slice(&p.couplings);
            }
            ModelParams::Pam(p) => {
                out.extend_from_slice(&p.hoppings);
                out.extend_from_slice(&p.hybridizations);
                out.push(p.u_conduction);
                out.push(p.u_localized);
            }
        }
        out
    }

    /// Copy with the tunables replaced; fixed energies are kept.
    pub fn with_tunables(&self, vals: &[T]) -> Result<Self> {
        if vals.len() != self.tunable_len() {
            return Err(Error::ParamMismatch(format!(
                "tunable vector has length {}, expected {}",
                vals.len(),
                self.tunable_len()
            )));
        }
        ensure_finite("tunables", vals)?;
        let n = self.n_sites();
        let mut out = self.clone();
        match &mut out {
            ModelParams::CavityOnly(p) => p.hoppings.copy_from_slice(vals),
            ModelParams::Jch(p) => {
                p.hoppings.copy_from_slice(&vals[..n - 1]);
                p.couplings.copy_from_slice(&vals[n - 1..]);
            }
            ModelParams::Pam(p) => {
                p.hoppings.copy_from_slice(&vals[..n - 1]);
                p.hybridizations.copy_from_slice(&vals[n - 1..2 * n - 1]);
                p.u_conduction = vals[2 * n - 1];
                p.u_localized = vals[2 * n];
            }
        }
        Ok(out)
    }

    /// Full slot vector `[tunables.., fixed energies..]` consumed by
    /// [`super::HamiltonianStructure::fill`].
    pub fn full_slots(&self) -> Vec<T> {
        let mut out = self.tunables();
        match self {
            ModelParams::CavityOnly(p) => out.extend_from_slice(&p.site_energies),
            ModelParams::Jch(p) => {
                out.extend_from_slice(&p.cavity_energies);
                out.extend_from_slice(&p.emitter_energies);
            }
            ModelParams::Pam(_) => {}
        }
        out
    }

    /// Uniform rescaling of every tunable by `factor > 0`. Fixed energies are
    /// untouched, so at zero detuning `fidelity(s * p, t / s) = fidelity(p, t)`.
    pub fn rescaled(&self, factor: T) -> Result<Self> {
        if !(factor > T::zero()) || !factor.is_finite() {
            return Err(Error::ParamMismatch(format!(
                "rescale factor must be finite and positive, got {}",
                factor.as_f64()
            )));
        }
        let scaled: Vec<T> = self.tunables().iter().map(|&v| v * factor).collect();
        self.with_tunables(&scaled)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tunable_round_trip_keeps_fixed_energies() {
        let p = ModelParams::Jch(
            JchParams::new(
                vec![0.5, 0.5, 0.5],
                vec![-0.25, 0.0, 0.25],
                vec![1.0, 2.0],
                vec![3.0, 4.0, 5.0],
            )
            .unwrap(),
        );
        assert_eq!(p.tunables(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        let q = p.with_tunables(&[9.0, 8.0, 7.0, 6.0, 5.0]).unwrap();
        match &q {
            ModelParams::Jch(j) => {
                assert_eq!(j.hoppings, vec![9.0, 8.0]);
                assert_eq!(j.couplings, vec![7.0, 6.0, 5.0]);
                assert_eq!(j.cavity_energies, vec![0.5, 0.5, 0.5]);
                assert_eq!(j.emitter_energies, vec![-0.25, 0.0, 0.25]);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn rescale_scales_tunables_only() {
        let p = ModelParams::Pam(
            PamParams::new(vec![1.0, 2.0, 1.0], vec![0.5; 4], 10.0, 20.0).unwrap(),
        );
        let q = p.rescaled(2.0).unwrap();
        assert_eq!(q.tunables(), vec![2.0, 4.0, 2.0, 1.0, 1.0, 1.0, 1.0, 20.0, 40.0]);
        assert!(p.rescaled(0.0).is_err());
        assert!(p.rescaled(-1.0).is_err());
    }

    #[test]
    fn length_mismatches_are_rejected() {
        assert!(JchParams::new(vec![0.0; 3], vec![0.0; 3], vec![1.0; 3], vec![1.0; 3]).is_err());
        assert!(PamParams::new(vec![1.0; 4], vec![1.0; 4], 0.0, 0.0).is_err());
        assert!(CavityParams::new(vec![0.0; 1], vec![]).is_err());
        assert!(JchParams::resonant(vec![1.0], vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn unit_templates_have_all_ones_tunables() {
        for kind in [ModelKind::CavityOnly, ModelKind::Jch, ModelKind::Pam] {
            let p = ModelParams::<f64>::unit(kind, 4).unwrap();
            assert_eq!(p.kind(), kind);
            assert_eq!(p.n_sites(), 4);
            assert!(p.tunables().iter().all(|&v| v == 1.0));
        }
        assert!(ModelParams::<f64>::unit(ModelKind::Jch, 1).is_err());
    }
}
