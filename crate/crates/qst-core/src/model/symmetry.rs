//! Mirror-symmetry constraints on tunable parameters.
//!
//! Reflecting a chain about its center maps bond `i` to bond `n - i` and
//! site `i` to site `n + 1 - i`. Tying reflected couplings together halves
//! the search space; the constraint is expressed as a partition of the flat
//! tunable vector into orbits sharing one free value.

use serde::{Deserialize, Serialize};

use super::basis::ModelKind;
use super::params::tunable_len;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryConstraint {
    /// Disjoint index sets covering `0..n_params`, ordered by smallest member.
    orbits: Vec<Vec<usize>>,
    n_params: usize,
}

impl SymmetryConstraint {
    /// No constraint: every parameter is its own orbit.
    pub fn identity(n_params: usize) -> Self {
        Self {
            orbits: (0..n_params).map(|i| vec![i]).collect(),
            n_params,
        }
    }

    /// Mirror constraint for `kind` on `n` sites, over the tunable layout of
    /// [`super::ModelParams::tunables`]. Interaction strengths of the
    /// impurity chain are site-independent and stay free.
    pub fn mirror(kind: ModelKind, n: usize) -> Self {
        let mut orbits = Vec::new();
        let n_bonds = n - 1;
        let pair_up = |offset: usize, len: usize, orbits: &mut Vec<Vec<usize>>| {
            for i in 0..len {
                let j = len - 1 - i;
                if i < j {
                    orbits.push(vec![offset + i, offset + j]);
                } else if i == j {
                    orbits.push(vec![offset + i]);
                }
            }
        };
        pair_up(0, n_bonds, &mut orbits);
        match kind {
            ModelKind::CavityOnly => {}
            ModelKind::Jch | ModelKind::Pam => pair_up(n_bonds, n, &mut orbits),
        }
        if kind == ModelKind::Pam {
            orbits.push(vec![2 * n - 1]);
            orbits.push(vec![2 * n]);
        }
        Self { orbits, n_params: tunable_len(kind, n) }
    }

    /// Number of free values.
    pub fn n_free(&self) -> usize {
        self.orbits.len()
    }

    /// Length of the full tunable vector.
    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// Scatters one free value per orbit into the full vector.
    pub fn expand_into<T: Copy>(&self, free: &[T], out: &mut [T]) {
        debug_assert_eq!(free.len(), self.orbits.len());
        debug_assert_eq!(out.len(), self.n_params);
        for (value, orbit) in free.iter().zip(&self.orbits) {
            for &idx in orbit {
                out[idx] = *value;
            }
        }
    }

    /// Representative (first member) of each orbit.
    pub fn reduce<T: Copy>(&self, full: &[T]) -> Vec<T> {
        debug_assert_eq!(full.len(), self.n_params);
        self.orbits.iter().map(|o| full[o[0]]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(c: &SymmetryConstraint, free: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; c.n_params()];
        c.expand_into(free, &mut out);
        out
    }

    #[test]
    fn three_site_chain_has_three_free_couplings() {
        // J1 = J2; g1 = g3; g2 free.
        let c = SymmetryConstraint::mirror(ModelKind::Jch, 3);
        assert_eq!(c.n_free(), 3);
        assert_eq!(c.n_params(), 5);
        let full = expand(&c, &[7.0, 1.0, 2.0]);
        assert_eq!(full, vec![7.0, 7.0, 1.0, 2.0, 1.0]);
    }

    #[test]
    fn orbit_counts_match_reflection_classes() {
        for n in 2..=9 {
            let jch = SymmetryConstraint::mirror(ModelKind::Jch, n);
            assert_eq!(jch.n_free(), (n - 1).div_ceil(2) + n.div_ceil(2));
            let pam = SymmetryConstraint::mirror(ModelKind::Pam, n);
            assert_eq!(pam.n_free(), (n - 1).div_ceil(2) + n.div_ceil(2) + 2);
            let cav = SymmetryConstraint::mirror(ModelKind::CavityOnly, n);
            assert_eq!(cav.n_free(), (n - 1).div_ceil(2));
        }
        // N=8: four bond orbits and four site orbits per coupling family.
        let c = SymmetryConstraint::mirror(ModelKind::Jch, 8);
        assert_eq!(c.n_free(), 8);
    }

    #[test]
    fn orbits_partition_all_parameters() {
        for kind in [ModelKind::CavityOnly, ModelKind::Jch, ModelKind::Pam] {
            for n in 2..=8 {
                let c = SymmetryConstraint::mirror(kind, n);
                let mut seen = vec![false; c.n_params()];
                for orbit in c.orbits() {
                    for &i in orbit {
                        assert!(!seen[i]);
                        seen[i] = true;
                    }
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }

    #[test]
    fn expanded_vectors_are_mirror_symmetric() {
        let c = SymmetryConstraint::mirror(ModelKind::Pam, 4);
        // [t-orbits: (t1,t3), t2 | v-orbits: (v1,v4), (v2,v3) | Uc | Ud]
        assert_eq!(c.n_free(), 6);
        let full = expand(&c, &[1.0, 2.0, 3.0, 4.0, 10.0, 20.0]);
        assert_eq!(full, vec![1.0, 2.0, 1.0, 3.0, 4.0, 4.0, 3.0, 10.0, 20.0]);
        assert_eq!(c.reduce(&full), vec![1.0, 2.0, 3.0, 4.0, 10.0, 20.0]);
    }

    #[test]
    fn identity_keeps_every_parameter_free() {
        let c = SymmetryConstraint::identity(5);
        assert_eq!(c.n_free(), 5);
        let full = expand(&c, &[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(full, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
    }
}
