//! Time evolution: eigendecomposition, propagators, fidelities, and the
//! action that the annealers minimize.

mod action;
mod eigen;
mod propagator;
mod spectral;
mod trace;

pub use action::{action, mean_infidelity};
pub use propagator::{propagator, transfer_fidelity, TransferTarget, UnitaryMatrix};
pub use spectral::{spectral_decompose, SpectralDecomposition};
pub use trace::{fidelity_trace, FidelityTrace};

pub(crate) use eigen::sym_eigen_in_place;
pub(crate) use propagator::propagator_column_parts;
