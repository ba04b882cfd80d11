//! Lattice models, their coupling parameters, and sector Hamiltonians.

mod basis;
mod christandl;
mod hamiltonian;
mod params;
mod symmetry;

pub use basis::{enumerate_basis, Basis, BasisState, ModelKind};
pub use christandl::{christandl_couplings, christandl_transfer_time};
pub use hamiltonian::{build_hamiltonian, HamiltonianStructure, HermitianMatrix};
pub use params::{CavityParams, JchParams, ModelParams, PamParams};
pub use symmetry::SymmetryConstraint;
