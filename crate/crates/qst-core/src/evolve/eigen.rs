//! In-place real-symmetric eigensolver.
//!
//! Householder tridiagonalization followed by implicit-shift QL with
//! eigenvector accumulation, after the classic EISPACK `tred2`/`tql2`
//! routines. Runs on a column-major slice with caller-provided scratch so the
//! optimizer loop performs no allocation.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_QL_ITER: usize = 40;

fn hypot<T: Real>(a: T, b: T) -> T {
    let (a, b) = (a.abs(), b.abs());
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if hi == T::zero() {
        return T::zero();
    }
    let r = lo / hi;
    hi * (T::one() + r * r).sqrt()
}

/// Diagonalizes the symmetric matrix stored column-major in `v` (`n * n`).
/// On return `v` holds orthonormal eigenvectors as columns and `d` the
/// eigenvalues in ascending order; `e` is scratch. Only the lower triangle
/// of the input is referenced.
pub(crate) fn sym_eigen_in_place<T: Real>(
    n: usize,
    v: &mut [T],
    d: &mut [T],
    e: &mut [T],
) -> Result<()> {
    assert_eq!(v.len(), n * n);
    assert_eq!(d.len(), n);
    assert_eq!(e.len(), n);
    if n == 0 {
        return Ok(());
    }
    tred2(n, v, d, e);
    tql2(n, v, d, e)?;
    sort_ascending(n, v, d);
    Ok(())
}

/// Householder reduction to tridiagonal form with accumulated transform.
fn tred2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) {
    let at = |r: usize, c: usize| c * n + r;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = T::zero();
                v[at(j, i)] = T::zero();
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = T::zero();
            }

            for j in 0..i {
                let f = d[j];
                v[at(j, i)] = f;
                let mut g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            let mut f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[at(k, j)] = v[at(k, j)] - (f * e[k] + g * d[k]);
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = T::zero();
            }
        }
        d[i] = h;
    }

    // accumulate the Householder transformations
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] = v[at(k, j)] - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = T::zero();
    }
    v[at(n - 1, n - 1)] = T::one();
    e[0] = T::zero();
}

/// Implicit-shift QL on the tridiagonal form, rotating the eigenvector
/// columns along.
fn tql2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let eps = T::default_epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITER {
                    return Err(Error::EigenFailure);
                }

                let g = d[l];
                let mut p = (d[l + 1] - g) / (e[l] + e[l]);
                let mut r = hypot(p, T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    // rotate eigenvector columns i and i+1
                    let (lo, hi) = v.split_at_mut((i + 1) * n);
                    let col_i = &mut lo[i * n..];
                    let col_j = &mut hi[..n];
                    for (xi, xj) in col_i.iter_mut().zip(col_j.iter_mut()) {
                        let h = *xj;
                        *xj = s * *xi + c * h;
                        *xi = c * *xi - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}

/// Selection sort into ascending eigenvalue order, moving columns along.
fn sort_ascending<T: Real>(n: usize, v: &mut [T], d: &mut [T]) {
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        for j in i + 1..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            for r in 0..n {
                v.swap(i * n + r, k * n + r);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn decompose(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
        let n = m.nrows();
        let mut v = m.clone();
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        sym_eigen_in_place(n, v.as_mut_slice(), &mut d, &mut e).unwrap();
        (d, v)
    }

    fn random_symmetric(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
        let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        (&a + a.transpose()) * 0.5
    }

    #[test]
    fn recovers_known_spectrum_of_a_diagonal_plus_coupling() {
        // [[1, 2], [2, 1]] has eigenvalues -1 and 3.
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        let (d, v) = decompose(&m);
        assert!((d[0] + 1.0).abs() < 1e-14);
        assert!((d[1] - 3.0).abs() < 1e-14);
        let resid = &m * v.column(0) - v.column(0) * d[0];
        assert!(resid.amax() < 1e-14);
    }

    #[test]
    fn matches_reference_eigensolver_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in [1usize, 2, 3, 5, 8, 16, 32, 64] {
            let m = random_symmetric(n, &mut rng);
            let (d, _) = decompose(&m);
            let mut reference = nalgebra::SymmetricEigen::new(m.clone()).eigenvalues
                .iter()
                .copied()
                .collect::<Vec<_>>();
            reference.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a, b) in d.iter().zip(reference) {
                assert!((a - b).abs() < 1e-10, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal_and_reconstruct_the_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 7, 33] {
            let m = random_symmetric(n, &mut rng);
            let (d, v) = decompose(&m);
            let gram = v.transpose() * &v;
            assert!((gram - DMatrix::identity(n, n)).amax() < 1e-10);
            let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone()));
            let recon = &v * lambda * v.transpose();
            assert!((recon - &m).amax() < 1e-9 * m.amax().max(1.0));
            for w in d.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn handles_degenerate_and_already_diagonal_input() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0, -1.0]));
        let (d, v) = decompose(&m);
        assert_eq!(d, vec![-1.0, 2.0, 2.0]);
        let gram = v.transpose() * &v;
        assert!((gram - DMatrix::identity(3, 3)).amax() < 1e-12);

        let z = DMatrix::zeros(4, 4);
        let (d, _) = decompose(&z);
        assert_eq!(d, vec![0.0; 4]);
    }
}
