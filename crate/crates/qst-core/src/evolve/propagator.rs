//! Time-evolution operators and transfer fidelities.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::spectral::SpectralDecomposition;
use crate::scalar::Real;

/// A source/destination pair of basis-state indices for a transfer.
///
/// The constructor rejects equal indices since a state trivially overlaps
/// itself at `t = 0`; use [`TransferTarget::returning`] when a revival of the
/// initial state is genuinely wanted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransferTarget {
    from: usize,
    to: usize,
}

impl TransferTarget {
    pub fn new(from: usize, to: usize) -> Result<Self> {
        if from == to {
            return Err(Error::InvalidTarget(format!(
                "transfer from state {from} to itself is trivial at t = 0; \
                 use `returning` for an intentional revival target"
            )));
        }
        Ok(Self { from, to })
    }

    /// A target asking the initial state to return to itself.
    pub fn returning(index: usize) -> Self {
        Self { from: index, to: index }
    }

    pub fn from_index(&self) -> usize {
        self.from
    }

    pub fn to_index(&self) -> usize {
        self.to
    }

    /// Bounds check against a Hilbert-space dimension.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.from >= dim || self.to >= dim {
            return Err(Error::InvalidTarget(format!(
                "target {} -> {} out of range for dimension {dim}",
                self.from, self.to
            )));
        }
        Ok(())
    }
}

/// Dense time-evolution operator `U(t) = exp(-i H t)`.
#[derive(Clone, Debug)]
pub struct UnitaryMatrix<T: Real> {
    time: T,
    mat: DMatrix<Complex<T>>,
}

impl<T: Real> UnitaryMatrix<T> {
    /// Wraps an explicit matrix, verifying it is square and unitary.
    pub fn from_matrix(mat: DMatrix<Complex<T>>, time: T) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidTarget(format!(
                "evolution operator must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let gram = mat.adjoint() * &mat;
        let n = mat.nrows();
        let mut worst = T::zero();
        for r in 0..n {
            for c in 0..n {
                let expect = if r == c { T::one() } else { T::zero() };
                worst = worst.max((gram[(r, c)].re - expect).abs().max(gram[(r, c)].im.abs()));
            }
        }
        let tol = crate::scalar::tol::<T>(1e-8);
        if worst > tol {
            return Err(Error::InvalidTarget(format!(
                "matrix is not unitary: max |U^H U - I| = {:.3e}",
                worst.as_f64()
            )));
        }
        Ok(Self { time, mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Evolution time this operator was built at.
    pub fn time(&self) -> T {
        self.time
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.mat
    }

    /// Transition amplitude `<to| U |from>`.
    pub fn amplitude(&self, target: TransferTarget) -> Complex<T> {
        self.mat[(target.to, target.from)]
    }
}

/// Builds `U(t) = V exp(-i Lambda t) V^T` from a spectral decomposition.
pub fn propagator<T: Real>(spectral: &SpectralDecomposition<T>, time: T) -> UnitaryMatrix<T> {
    let n = spectral.dim();
    let v = spectral.eigenvectors();
    // scale eigenvector column k by the phase exp(-i lambda_k t)
    let mut phased = DMatrix::<Complex<T>>::zeros(n, n);
    for k in 0..n {
        let angle = -spectral.eigenvalues()[k] * time;
        let phase = Complex::new(angle.cos(), angle.sin());
        for r in 0..n {
            phased[(r, k)] = phase.scale(v[(r, k)]);
        }
    }
    let v_t = v.map(|x| Complex::new(x, T::zero())).transpose();
    UnitaryMatrix { time, mat: phased * v_t }
}

/// Writes the column `U(t) |from>` into `(re, im)` without forming the full
/// operator: `O(dim^2)` instead of `O(dim^3)`. Reference form of the kernel
/// behind `propagator_column_parts`, kept as a cross-check.
#[cfg(test)]
pub(crate) fn propagator_column<T: Real>(
    spectral: &SpectralDecomposition<T>,
    time: T,
    from: usize,
    re: &mut [T],
    im: &mut [T],
) {
    let n = spectral.dim();
    debug_assert!(from < n);
    debug_assert_eq!(re.len(), n);
    debug_assert_eq!(im.len(), n);
    re.fill(T::zero());
    im.fill(T::zero());
    let v = spectral.eigenvectors();
    for k in 0..n {
        let weight = v[(from, k)];
        if weight == T::zero() {
            continue;
        }
        let angle = -spectral.eigenvalues()[k] * time;
        let (wc, ws) = (weight * angle.cos(), weight * angle.sin());
        let col = v.column(k);
        for a in 0..n {
            re[a] += wc * col[a];
            im[a] += ws * col[a];
        }
    }
}

/// Column kernel over raw column-major eigenvector storage with the phase
/// factors `exp(-i lambda_k t)` already tabulated, so several source columns
/// can share one round of trigonometry.
pub(crate) fn propagator_column_parts<T: Real>(
    n: usize,
    vectors: &[T],
    phase_cos: &[T],
    phase_sin: &[T],
    from: usize,
    re: &mut [T],
    im: &mut [T],
) {
    debug_assert!(from < n);
    debug_assert_eq!(vectors.len(), n * n);
    re.fill(T::zero());
    im.fill(T::zero());
    for k in 0..n {
        let col = &vectors[k * n..(k + 1) * n];
        let weight = col[from];
        if weight == T::zero() {
            continue;
        }
        let (wc, ws) = (weight * phase_cos[k], weight * phase_sin[k]);
        for a in 0..n {
            re[a] += wc * col[a];
            im[a] += ws * col[a];
        }
    }
}

/// Probability `|<to| U(t) |from>|^2` of finding the system in the target
/// state after evolving the source state.
pub fn transfer_fidelity<T: Real>(u: &UnitaryMatrix<T>, target: TransferTarget) -> Result<T> {
    target.check_dim(u.dim())?;
    Ok(u.amplitude(target).norm_sqr())
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::evolve::spectral::spectral_decompose;
    use crate::model::{
        build_hamiltonian, christandl_couplings, christandl_transfer_time, enumerate_basis,
        CavityParams, JchParams, ModelKind, ModelParams,
    };

    fn random_jch(n: usize, rng: &mut impl Rng) -> (ModelParams<f64>, crate::model::Basis) {
        let params = ModelParams::Jch(
            JchParams::resonant(
                (0..n - 1).map(|_| rng.gen_range(0.1..3.0)).collect(),
                (0..n).map(|_| rng.gen_range(0.1..3.0)).collect(),
            )
            .unwrap(),
        );
        let basis = enumerate_basis(ModelKind::Jch, n, 2).unwrap();
        (params, basis)
    }

    #[test]
    fn two_level_hopping_oscillates_as_sin_squared() {
        // H = J (|1><2| + |2><1|) transfers with probability sin^2(J t).
        let basis = enumerate_basis(ModelKind::CavityOnly, 2, 1).unwrap();
        for (j, t) in [(1.0f64, 0.3f64), (2.5, 1.7), (0.4, 11.0)] {
            let params =
                ModelParams::CavityOnly(CavityParams::resonant(vec![j]).unwrap());
            let h = build_hamiltonian(&params, &basis).unwrap();
            let u = propagator(&spectral_decompose(&h).unwrap(), t);
            let f = transfer_fidelity(&u, TransferTarget::new(0, 1).unwrap()).unwrap();
            assert!((f - (j * t).sin().powi(2)).abs() < 1e-12, "J={j} t={t}");
        }
    }

    #[test]
    fn engineered_couplings_give_perfect_end_to_end_transfer() {
        for n in [3usize, 5, 9] {
            let params = ModelParams::CavityOnly(
                CavityParams::resonant(christandl_couplings(n, 1.0).unwrap()).unwrap(),
            );
            let basis = enumerate_basis(ModelKind::CavityOnly, n, 1).unwrap();
            let h = build_hamiltonian(&params, &basis).unwrap();
            let s = spectral_decompose(&h).unwrap();
            let u = propagator(&s, christandl_transfer_time(1.0));
            let f = transfer_fidelity(&u, TransferTarget::new(0, n - 1).unwrap()).unwrap();
            assert!(f > 1.0 - 1e-10, "n={n}: {f}");
        }
    }

    #[test]
    fn propagator_is_unitary_and_conserves_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (params, basis) = random_jch(4, &mut rng);
        let h = build_hamiltonian(&params, &basis).unwrap();
        let s = spectral_decompose(&h).unwrap();
        for t in [0.0, 0.9, 17.3] {
            let u = propagator(&s, t);
            let n = u.dim();
            let gram = u.matrix().adjoint() * u.matrix();
            let mut worst: f64 = 0.0;
            for r in 0..n {
                for c in 0..n {
                    let expect = if r == c { 1.0 } else { 0.0 };
                    worst = worst.max((gram[(r, c)].re - expect).abs());
                    worst = worst.max(gram[(r, c)].im.abs());
                }
            }
            assert!(worst < 1e-10, "t={t}: {worst}");
            for from in 0..n {
                let total: f64 = (0..n).map(|a| u.matrix()[(a, from)].norm_sqr()).sum();
                assert!((total - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn column_path_matches_the_full_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (params, basis) = random_jch(3, &mut rng);
        let h = build_hamiltonian(&params, &basis).unwrap();
        let s = spectral_decompose(&h).unwrap();
        let n = s.dim();
        let u = propagator(&s, 2.4);
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        for from in [0usize, n / 2, n - 1] {
            propagator_column(&s, 2.4, from, &mut re, &mut im);
            for a in 0..n {
                let entry = u.matrix()[(a, from)];
                assert!((entry.re - re[a]).abs() < 1e-12);
                assert!((entry.im - im[a]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rescaling_couplings_rescales_time_without_changing_fidelity() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let (params, basis) = random_jch(4, &mut rng);
        let h = build_hamiltonian(&params, &basis).unwrap();
        let target = TransferTarget::new(0, basis.dim() - 1).unwrap();
        let t = 3.7;
        let factor = 5.0;
        let f_base = transfer_fidelity(
            &propagator(&spectral_decompose(&h).unwrap(), t),
            target,
        )
        .unwrap();
        let scaled = build_hamiltonian(&params.rescaled(factor).unwrap(), &basis).unwrap();
        let f_scaled = transfer_fidelity(
            &propagator(&spectral_decompose(&scaled).unwrap(), t / factor),
            target,
        )
        .unwrap();
        assert!((f_base - f_scaled).abs() < 1e-9);
    }

    #[test]
    fn trivial_and_revival_targets_are_policed() {
        assert!(TransferTarget::new(3, 3).is_err());
        let r = TransferTarget::returning(3);
        assert_eq!(r.from_index(), 3);
        assert_eq!(r.to_index(), 3);
        assert!(TransferTarget::new(0, 9).unwrap().check_dim(5).is_err());
    }

    #[test]
    fn explicit_matrices_must_be_unitary() {
        let good = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex::new(0.0, 0.0),
                Complex::new(0.0, -1.0),
                Complex::new(0.0, -1.0),
                Complex::new(0.0, 0.0),
            ],
        );
        assert!(UnitaryMatrix::from_matrix(good, 1.0).is_ok());
        let bad = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex::new(0.5, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(1.0, 0.0),
            ],
        );
        assert!(UnitaryMatrix::from_matrix(bad, 1.0).is_err());
    }
}
