//! Excitation-sector basis enumeration.
//!
//! Every model here conserves the total excitation number, so Hamiltonians
//! act within one sector. States are enumerated in a fixed lexicographic
//! order; row/column indices everywhere in the crate refer to that order.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which lattice model a basis or parameter set belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Bare cavity chain: photons hopping along `n` sites, no emitters.
    CavityOnly,
    /// Jaynes-Cummings-Hubbard chain: `n` cavities, one two-level emitter each.
    Jch,
    /// Periodic Anderson chain: conduction band hybridized with localized orbitals.
    Pam,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::CavityOnly => "cavity-only",
            ModelKind::Jch => "jch",
            ModelKind::Pam => "pam",
        }
    }
}

/// One sector basis state. Ordering of the enum fields matches the
/// lexicographic enumeration order used by [`Basis`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisState {
    /// Sorted multiset of excited modes. Modes `0..n` are cavity photons,
    /// modes `n..2n` are emitter excitations (at most one each).
    Excitations(Vec<u16>),
    /// One spin-up and one spin-down electron. Orbitals `0..n` are conduction
    /// sites, `n..2n` their localized partners.
    ElectronPair { up: u16, down: u16 },
    /// A single electron of either spin species.
    Electron(u16),
}

/// Enumerated sector basis with constant-time index lookup.
#[derive(Clone, Debug)]
pub struct Basis {
    model: ModelKind,
    n_sites: usize,
    n_exc: usize,
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
}

/// Enumerates the `n_exc`-excitation sector of `model` on `n` sites.
///
/// Supported sectors: any `n_exc >= 1` for the bosonic models; the Anderson
/// chain supports one electron (`n_exc = 1`) or one electron per spin
/// (`n_exc = 2`). States come out in lexicographic order with photon modes
/// numbered before emitter modes.
pub fn enumerate_basis(model: ModelKind, n: usize, n_exc: usize) -> Result<Basis> {
    if n < 2 {
        return Err(Error::ChainTooShort(n));
    }
    let states = match (model, n_exc) {
        (_, 0) => {
            return Err(Error::UnsupportedSector { model: model.name(), n_exc });
        }
        (ModelKind::CavityOnly, k) => excitation_states(n as u16, k, |_| k),
        (ModelKind::Jch, k) => {
            excitation_states(2 * n as u16, k, |m| if (m as usize) < n { k } else { 1 })
        }
        (ModelKind::Pam, 1) => (0..2 * n as u16).map(BasisState::Electron).collect(),
        (ModelKind::Pam, 2) => {
            let mut v = Vec::with_capacity(4 * n * n);
            for up in 0..2 * n as u16 {
                for down in 0..2 * n as u16 {
                    v.push(BasisState::ElectronPair { up, down });
                }
            }
            v
        }
        (ModelKind::Pam, k) => {
            return Err(Error::UnsupportedSector { model: model.name(), n_exc: k });
        }
    };
    let index = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    Ok(Basis { model, n_sites: n, n_exc, states, index })
}

/// All sorted mode multisets of size `k`, modes `0..n_modes`, with per-mode
/// occupancy capped by `cap`. Recursion emits them in lexicographic order.
fn excitation_states(n_modes: u16, k: usize, cap: impl Fn(u16) -> usize) -> Vec<BasisState> {
    fn recurse(
        n_modes: u16,
        remaining: usize,
        start: u16,
        cap: &impl Fn(u16) -> usize,
        cur: &mut Vec<u16>,
        out: &mut Vec<BasisState>,
    ) {
        if remaining == 0 {
            out.push(BasisState::Excitations(cur.clone()));
            return;
        }
        for m in start..n_modes {
            let used = cur.iter().rev().take_while(|&&x| x == m).count();
            if used < cap(m) {
                cur.push(m);
                recurse(n_modes, remaining - 1, m, cap, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    recurse(n_modes, k, 0, &cap, &mut Vec::with_capacity(k), &mut out);
    out
}

impl Basis {
    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_exc(&self) -> usize {
        self.n_exc
    }

    /// Sector dimension.
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, idx: usize) -> &BasisState {
        &self.states[idx]
    }

    pub fn index_of(&self, state: &BasisState) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// Image of mode/orbital `m` under spatial reflection of the chain.
    fn mirror_mode(&self, m: u16) -> u16 {
        let n = self.n_sites as u16;
        if m < n {
            n - 1 - m
        } else {
            3 * n - 1 - m
        }
    }

    /// State obtained by reflecting the chain about its center.
    pub fn mirror_state(&self, state: &BasisState) -> BasisState {
        match state {
            BasisState::Excitations(modes) => {
                let mut m: Vec<u16> = modes.iter().map(|&x| self.mirror_mode(x)).collect();
                m.sort_unstable();
                BasisState::Excitations(m)
            }
            BasisState::ElectronPair { up, down } => BasisState::ElectronPair {
                up: self.mirror_mode(*up),
                down: self.mirror_mode(*down),
            },
            BasisState::Electron(o) => BasisState::Electron(self.mirror_mode(*o)),
        }
    }

    /// Permutation `perm[i] = index of the mirror image of state i`.
    /// An involution; fixed points are the self-symmetric states.
    pub fn mirror_permutation(&self) -> Vec<usize> {
        self.states
            .iter()
            .map(|s| {
                self.index_of(&self.mirror_state(s))
                    .expect("mirror image stays in sector")
            })
            .collect()
    }

    /// Unordered mirror pairs `(i, perm[i])` with `i < perm[i]`;
    /// self-symmetric states are excluded.
    pub fn mirror_pairs(&self) -> Vec<(usize, usize)> {
        self.mirror_permutation()
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i < j)
            .map(|(i, &j)| (i, j))
            .collect()
    }

    /// Index of the state with every excitation stacked on top-row site
    /// `site`: all photons in that cavity, or one electron of each spin in
    /// that conduction orbital. `None` if `site` is out of range.
    pub fn stacked_state(&self, site: usize) -> Option<usize> {
        if site >= self.n_sites {
            return None;
        }
        let s = site as u16;
        let state = match self.model {
            ModelKind::CavityOnly | ModelKind::Jch => {
                BasisState::Excitations(vec![s; self.n_exc])
            }
            ModelKind::Pam => match self.n_exc {
                1 => BasisState::Electron(s),
                _ => BasisState::ElectronPair { up: s, down: s },
            },
        };
        self.index_of(&state)
    }

    /// Human-readable state label with 1-based site numbering, e.g.
    /// `"c1 c1"`, `"c2 e3"`, `"up@c1 down@d4"`.
    pub fn label(&self, idx: usize) -> String {
        let n = self.n_sites as u16;
        let mode_label = |m: u16, photon: char, other: char| {
            if m < n {
                format!("{photon}{}", m + 1)
            } else {
                format!("{other}{}", m - n + 1)
            }
        };
        match &self.states[idx] {
            BasisState::Excitations(modes) => modes
                .iter()
                .map(|&m| mode_label(m, 'c', 'e'))
                .collect::<Vec<_>>()
                .join(" "),
            BasisState::ElectronPair { up, down } => format!(
                "up@{} down@{}",
                mode_label(*up, 'c', 'd'),
                mode_label(*down, 'c', 'd')
            ),
            BasisState::Electron(o) => mode_label(*o, 'c', 'd'),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(model: ModelKind, n: usize, k: usize) -> usize {
        enumerate_basis(model, n, k).unwrap().dim()
    }

    #[test]
    fn sector_dimensions_match_closed_forms() {
        // One excitation: a photon on each site or an excited emitter.
        for n in 2..=8 {
            assert_eq!(dim(ModelKind::CavityOnly, n, 1), n);
            assert_eq!(dim(ModelKind::Jch, n, 1), 2 * n);
            assert_eq!(dim(ModelKind::Pam, n, 1), 2 * n);
        }
        // Two excitations: doubly occupied cavities plus mode pairs.
        for n in 2..=8 {
            let m = 2 * n;
            assert_eq!(dim(ModelKind::Jch, n, 2), n + m * (m - 1) / 2);
        }
        assert_eq!(dim(ModelKind::Jch, 4, 2), 32);
        assert_eq!(dim(ModelKind::Jch, 6, 2), 72);
        assert_eq!(dim(ModelKind::Jch, 8, 2), 128);
        assert_eq!(dim(ModelKind::Pam, 4, 2), 64);
    }

    #[test]
    fn brute_force_count_agrees_for_small_sectors() {
        // Independent count: filter all occupation vectors of the full space.
        for n in 2..=5 {
            for k in 1..=2 {
                let mut count = 0u32;
                // photons per cavity 0..=k, emitter bits 0/1
                let cavity_configs = (k as u32 + 1).pow(n as u32);
                for c in 0..cavity_configs {
                    let mut rem = c;
                    let mut photons = 0;
                    for _ in 0..n {
                        photons += rem % (k as u32 + 1);
                        rem /= k as u32 + 1;
                    }
                    for e in 0..1u32 << n {
                        let excited = e.count_ones();
                        if photons + excited == k as u32 {
                            count += 1;
                        }
                    }
                }
                assert_eq!(dim(ModelKind::Jch, n, k), count as usize, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_unique() {
        let basis = enumerate_basis(ModelKind::Jch, 4, 2).unwrap();
        let states = basis.states();
        for w in states.windows(2) {
            assert!(w[0] < w[1]);
        }
        // Photon modes come first: the first state is two photons on site 1.
        assert_eq!(states[0], BasisState::Excitations(vec![0, 0]));
        assert_eq!(basis.index_of(&BasisState::Excitations(vec![0, 0])), Some(0));
        // Emitters are hard-core: no doubly excited emitter appears.
        for s in states {
            if let BasisState::Excitations(modes) = s {
                if modes[0] == modes[1] {
                    assert!((modes[0] as usize) < 4);
                }
            }
        }
    }

    #[test]
    fn unsupported_sectors_are_rejected() {
        assert!(matches!(
            enumerate_basis(ModelKind::Pam, 4, 3),
            Err(Error::UnsupportedSector { .. })
        ));
        assert!(matches!(
            enumerate_basis(ModelKind::Jch, 4, 0),
            Err(Error::UnsupportedSector { .. })
        ));
        assert!(matches!(
            enumerate_basis(ModelKind::Jch, 1, 1),
            Err(Error::ChainTooShort(1))
        ));
    }

    #[test]
    fn mirror_is_an_involution_with_expected_fixed_points() {
        for (model, n, k) in [
            (ModelKind::Jch, 4, 2),
            (ModelKind::Jch, 3, 1),
            (ModelKind::Pam, 4, 2),
            (ModelKind::CavityOnly, 5, 1),
        ] {
            let basis = enumerate_basis(model, n, k).unwrap();
            let perm = basis.mirror_permutation();
            for (i, &j) in perm.iter().enumerate() {
                assert_eq!(perm[j], i);
            }
        }
        // N=4 two-excitation sector: exactly 4 self-symmetric states, so
        // (32 - 4) / 2 = 14 unordered mirror pairs.
        let basis = enumerate_basis(ModelKind::Jch, 4, 2).unwrap();
        assert_eq!(basis.mirror_pairs().len(), 14);
    }

    #[test]
    fn stacked_states_sit_on_the_top_row() {
        let jch = enumerate_basis(ModelKind::Jch, 4, 2).unwrap();
        let from = jch.stacked_state(0).unwrap();
        let to = jch.stacked_state(3).unwrap();
        assert_eq!(jch.state(from), &BasisState::Excitations(vec![0, 0]));
        assert_eq!(jch.state(to), &BasisState::Excitations(vec![3, 3]));
        assert_eq!(jch.stacked_state(4), None);

        let pam = enumerate_basis(ModelKind::Pam, 3, 2).unwrap();
        let end = pam.stacked_state(2).unwrap();
        assert_eq!(pam.label(end), "up@c3 down@c3");

        let single = enumerate_basis(ModelKind::Jch, 5, 1).unwrap();
        assert_eq!(single.stacked_state(4), Some(4));
    }

    #[test]
    fn labels_use_one_based_sites() {
        let basis = enumerate_basis(ModelKind::Jch, 3, 1).unwrap();
        let labels: Vec<String> = (0..basis.dim()).map(|i| basis.label(i)).collect();
        assert_eq!(labels, ["c1", "c2", "c3", "e1", "e2", "e3"]);

        let pam = enumerate_basis(ModelKind::Pam, 2, 2).unwrap();
        assert_eq!(pam.label(0), "up@c1 down@c1");
        assert_eq!(pam.label(pam.dim() - 1), "up@d2 down@d2");
    }
}
