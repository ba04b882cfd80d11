//! Eigendecomposition of Hamiltonians into reusable spectral form.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::evolve::eigen::sym_eigen_in_place;
use crate::model::HermitianMatrix;
use crate::scalar::Real;

/// Eigenvalues and eigenvectors of a Hamiltonian, the form every
/// time-evolution quantity is computed from.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition<T: Real> {
    eigenvalues: Vec<T>,
    eigenvectors: DMatrix<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors, column `k` pairing with eigenvalue `k`.
    pub fn eigenvectors(&self) -> &DMatrix<T> {
        &self.eigenvectors
    }

    /// Largest minus smallest eigenvalue, zero for an empty spectrum.
    pub fn spectral_span(&self) -> T {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(&lo), Some(&hi)) => hi - lo,
            _ => T::zero(),
        }
    }

}

/// Diagonalizes a Hamiltonian. Allocates fresh storage; the optimizer uses
/// its own reusable workspace instead of this entry point.
pub fn spectral_decompose<T: Real>(h: &HermitianMatrix<T>) -> Result<SpectralDecomposition<T>> {
    let n = h.dim();
    let mut v = h.matrix().clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    sym_eigen_in_place(n, v.as_mut_slice(), &mut d, &mut e)?;
    Ok(SpectralDecomposition { eigenvalues: d, eigenvectors: v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        build_hamiltonian, christandl_couplings, enumerate_basis, CavityParams, ModelKind,
        ModelParams,
    };

    fn christandl_hamiltonian(n: usize) -> HermitianMatrix<f64> {
        let params = ModelParams::CavityOnly(
            CavityParams::resonant(christandl_couplings(n, 1.0).unwrap()).unwrap(),
        );
        let basis = enumerate_basis(ModelKind::CavityOnly, n, 1).unwrap();
        build_hamiltonian(&params, &basis).unwrap()
    }

    #[test]
    fn four_site_engineered_chain_has_odd_integer_spectrum() {
        // Couplings (sqrt(3), 2, sqrt(3)) give eigenvalues (-3, -1, 1, 3).
        let spectral = spectral_decompose(&christandl_hamiltonian(4)).unwrap();
        let expected = [-3.0, -1.0, 1.0, 3.0];
        for (got, want) in spectral.eigenvalues().iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!((spectral.spectral_span() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_reconstructs_the_hamiltonian() {
        let h = christandl_hamiltonian(7);
        let s = spectral_decompose(&h).unwrap();
        let lambda =
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(s.eigenvalues().to_vec()));
        let recon = s.eigenvectors() * lambda * s.eigenvectors().transpose();
        assert!((recon - h.matrix()).amax() < 1e-12);
    }
}
