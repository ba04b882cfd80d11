//! Sector Hamiltonians: validated storage and sparse assembly.
//!
//! Both lattice models are time-reversal invariant with real couplings, so
//! every sector Hamiltonian is a real symmetric matrix; [`HermitianMatrix`]
//! stores that real representation. Matrix elements are linear in the
//! parameters, so a basis walk is done once per objective and recorded as
//! coefficient triplets ([`HamiltonianStructure`]); refilling under new
//! parameters is then allocation-free.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{tol, Real};

use super::basis::{Basis, BasisState, ModelKind};
use super::params::ModelParams;

/// Real symmetric sector Hamiltonian, validated on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T: Real> {
    mat: DMatrix<T>,
}

impl<T: Real> HermitianMatrix<T> {
    /// Wraps a matrix, requiring it to be square, finite, and symmetric
    /// within `1e-12` relative to its largest element.
    pub fn new(mat: DMatrix<T>) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::ParamMismatch(format!(
                "matrix is {}x{}, expected square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        let scale = mat.iter().fold(T::one(), |m, &v| m.max(v.abs()));
        let mut asym = T::zero();
        for r in 0..mat.nrows() {
            for c in r + 1..mat.ncols() {
                asym = asym.max((mat[(r, c)] - mat[(c, r)]).abs());
            }
        }
        if asym > tol::<T>(1e-12) * scale {
            return Err(Error::NotHermitian(asym.as_f64()));
        }
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.mat
    }

    pub fn into_inner(self) -> DMatrix<T> {
        self.mat
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.mat.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }
}

/// One assembly term: `H[row, col] += weight * slots[slot]`.
#[derive(Clone, Copy, Debug)]
struct Term<T> {
    row: u32,
    col: u32,
    slot: u32,
    weight: T,
}

/// Sparse linear map from a parameter slot vector to a sector Hamiltonian.
///
/// Slot layout matches [`ModelParams::full_slots`]. Terms are emitted per
/// source state, so the symmetric partner of every off-diagonal entry is
/// produced when the partner state is visited; assembly is exactly symmetric.
#[derive(Clone, Debug)]
pub struct HamiltonianStructure<T> {
    dim: usize,
    n_slots: usize,
    terms: Vec<Term<T>>,
}

impl<T: Real> HamiltonianStructure<T> {
    pub fn new(basis: &Basis) -> Self {
        let n = basis.n_sites();
        let (n_slots, terms) = match basis.model() {
            ModelKind::CavityOnly => (2 * n - 1, excitation_terms(basis, false)),
            ModelKind::Jch => (4 * n - 1, excitation_terms(basis, true)),
            ModelKind::Pam => (2 * n + 1, pam_terms(basis)),
        };
        Self { dim: basis.dim(), n_slots, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    /// Assembles the Hamiltonian for the given slot values into `h`,
    /// overwriting it. `h` must be `dim x dim`.
    pub fn fill(&self, slots: &[T], h: &mut DMatrix<T>) {
        debug_assert_eq!(slots.len(), self.n_slots);
        debug_assert_eq!(h.nrows(), self.dim);
        debug_assert_eq!(h.ncols(), self.dim);
        h.fill(T::zero());
        for t in &self.terms {
            h[(t.row as usize, t.col as usize)] += t.weight * slots[t.slot as usize];
        }
    }
}

/// Multiplicity of `mode` in a sorted mode list.
fn count_of(modes: &[u16], mode: u16) -> usize {
    modes.iter().filter(|&&m| m == mode).count()
}

/// Sorted copy of `modes` with one occurrence of `from` replaced by `to`.
fn replace_mode(modes: &[u16], from: u16, to: u16) -> Vec<u16> {
    let mut out = modes.to_vec();
    let pos = out.iter().position(|&m| m == from).expect("mode present");
    out[pos] = to;
    out.sort_unstable();
    out
}

/// Terms for the bosonic chains. With `with_emitters`, slots are
/// `[J (n-1) | g (n) | cavity energies (n) | emitter energies (n)]`;
/// without, `[J (n-1) | site energies (n)]`.
fn excitation_terms<T: Real>(basis: &Basis, with_emitters: bool) -> Vec<Term<T>> {
    let n = basis.n_sites() as u16;
    let slot_j = |bond: u16| bond as u32;
    let slot_g = |site: u16| (n - 1 + site) as u32;
    let slot_cavity = |site: u16| {
        if with_emitters {
            (2 * n - 1 + site) as u32
        } else {
            (n - 1 + site) as u32
        }
    };
    let slot_emitter = |site: u16| (3 * n - 1 + site) as u32;

    let mut terms = Vec::new();
    for (row, state) in basis.states().iter().enumerate() {
        let modes = match state {
            BasisState::Excitations(m) => m,
            _ => unreachable!("bosonic basis"),
        };
        let row = row as u32;
        let term_to = |target: Vec<u16>, slot: u32, weight: T| -> Term<T> {
            let target_row = basis
                .index_of(&BasisState::Excitations(target))
                .expect("sector closed under hopping") as u32;
            Term { row: target_row, col: row, slot, weight }
        };

        let mut i = 0;
        while i < modes.len() {
            let m = modes[i];
            let k = count_of(modes, m);
            let sqrt_k = T::from_usize(k).unwrap().sqrt();
            if m < n {
                // photon on cavity m: energy, hops, absorption by the emitter
                terms.push(Term {
                    row,
                    col: row,
                    slot: slot_cavity(m),
                    weight: T::from_usize(k).unwrap(),
                });
                if m > 0 {
                    let w = sqrt_k * T::from_usize(count_of(modes, m - 1) + 1).unwrap().sqrt();
                    terms.push(term_to(replace_mode(modes, m, m - 1), slot_j(m - 1), w));
                }
                if m + 1 < n {
                    let w = sqrt_k * T::from_usize(count_of(modes, m + 1) + 1).unwrap().sqrt();
                    terms.push(term_to(replace_mode(modes, m, m + 1), slot_j(m), w));
                }
                if with_emitters && count_of(modes, n + m) == 0 {
                    terms.push(term_to(replace_mode(modes, m, n + m), slot_g(m), sqrt_k));
                }
            } else {
                // excited emitter on site m - n: energy and photon emission
                let site = m - n;
                terms.push(Term { row, col: row, slot: slot_emitter(site), weight: T::one() });
                let w = T::from_usize(count_of(modes, site) + 1).unwrap().sqrt();
                terms.push(term_to(replace_mode(modes, m, site), slot_g(site), w));
            }
            i += k;
        }
    }
    terms
}

/// Directed single-particle terms of the impurity chain over orbitals
/// `0..2n`: `(from, to, slot, weight)`. Slots are `[t (n-1) | v (n)]`;
/// conduction hopping enters with a negative sign.
fn pam_single_particle<T: Real>(n: u16) -> Vec<(u16, u16, u32, T)> {
    let mut terms = Vec::new();
    for o in 0..n {
        if o + 1 < n {
            terms.push((o, o + 1, o as u32, -T::one()));
            terms.push((o + 1, o, o as u32, -T::one()));
        }
        terms.push((o, n + o, (n - 1 + o) as u32, T::one()));
        terms.push((n + o, o, (n - 1 + o) as u32, T::one()));
    }
    terms
}

/// Terms for the impurity chain. Slots are `[t (n-1) | v (n) | Uc | Ud]`.
/// Opposite spins are distinguishable species, so the two-electron sector is
/// a direct product with on-site interaction terms on its diagonal.
fn pam_terms<T: Real>(basis: &Basis) -> Vec<Term<T>> {
    let n = basis.n_sites() as u16;
    let singles = pam_single_particle::<T>(n);
    let slot_uc = (2 * n - 1) as u32;
    let slot_ud = (2 * n) as u32;
    let mut terms = Vec::new();

    match basis.n_exc() {
        1 => {
            for &(from, to, slot, weight) in &singles {
                terms.push(Term { row: to as u32, col: from as u32, slot, weight });
            }
        }
        2 => {
            let row_of = |up: u16, down: u16| (up as u32) * (2 * n as u32) + down as u32;
            for up in 0..2 * n {
                for down in 0..2 * n {
                    let col = row_of(up, down);
                    for &(from, to, slot, weight) in &singles {
                        if from == up {
                            terms.push(Term { row: row_of(to, down), col, slot, weight });
                        }
                        if from == down {
                            terms.push(Term { row: row_of(up, to), col, slot, weight });
                        }
                    }
                    if up == down {
                        let slot = if up < n { slot_uc } else { slot_ud };
                        terms.push(Term { row: col, col, slot, weight: T::one() });
                    }
                }
            }
        }
        _ => unreachable!("basis enumeration rejects other sectors"),
    }
    terms
}

/// Builds the sector Hamiltonian of `params` in `basis`.
pub fn build_hamiltonian<T: Real>(params: &ModelParams<T>, basis: &Basis) -> Result<HermitianMatrix<T>> {
    if params.kind() != basis.model() {
        return Err(Error::ParamMismatch(format!(
            "{} parameters with a {} basis",
            params.kind().name(),
            basis.model().name()
        )));
    }
    if params.n_sites() != basis.n_sites() {
        return Err(Error::ParamMismatch(format!(
            "parameters for {} sites, basis has {}",
            params.n_sites(),
            basis.n_sites()
        )));
    }
    params.validate()?;
    let structure = HamiltonianStructure::new(basis);
    let mut h = DMatrix::zeros(basis.dim(), basis.dim());
    structure.fill(&params.full_slots(), &mut h);
    HermitianMatrix::new(h)
}
