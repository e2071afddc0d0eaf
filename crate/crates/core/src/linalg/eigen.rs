//! Cyclic Jacobi eigensolver for Hermitian matrices, and the spectral
//! quantities built on it (singular values, operator absolute value).

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative Frobenius tolerance on `A - A*` accepted as Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Sweeps stop once the off-diagonal mass falls below this fraction of `||A||_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = V diag(eigenvalues) V*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the matching unit eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl HermEig {
    /// `V diag(f(lambda)) V*`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &lk) in fl.iter().enumerate() {
                    acc += v[(i, k)] * v[(j, k)].conj() * lk;
                }
                if i == j {
                    out[(i, i)] = Complex64::new(acc.re, 0.0);
                } else {
                    out[(i, j)] = acc;
                    out[(j, i)] = acc.conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

/// Full eigen-decomposition of a Hermitian matrix.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermEig> {
    check_hermitian(a)?;
    let mut work = a.hermitian_part();
    let mut v = ComplexMatrix::identity(a.n());
    jacobi(&mut work, Some(&mut v))?;
    let n = a.n();
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| work[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(HermEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Ascending eigenvalues of a Hermitian matrix, without eigenvectors.
pub fn herm_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    eigenvalues_of_hermitian_part(a)
}

/// Skips the Hermitian check; the strictly lower triangle is taken from the upper.
pub(crate) fn eigenvalues_of_hermitian_part(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.n();
    let mut vals = if n == 2 {
        eigenvalues_2x2(a)
    } else {
        let mut work = a.hermitian_part();
        jacobi(&mut work, None)?;
        (0..n).map(|i| work[(i, i)].re).collect()
    };
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Closed form for 2x2: `(a + d)/2 +- hypot((a - d)/2, |b|)`.
fn eigenvalues_2x2(a: &ComplexMatrix) -> Vec<f64> {
    let p = a[(0, 0)].re;
    let q = a[(1, 1)].re;
    let b = (a[(0, 1)] + a[(1, 0)].conj()) * 0.5;
    let mean = 0.5 * (p + q);
    let radius = (0.5 * (p - q)).hypot(b.norm());
    vec![mean - radius, mean + radius]
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    let residual = a.hermitian_residual();
    let scale = a.frobenius_norm().max(1.0);
    if residual > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            residual: residual / scale,
        });
    }
    Ok(())
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// In-place cyclic Jacobi on an exactly Hermitian `a`. On return `a` is
/// diagonal up to the off-diagonal threshold and, if given, `v` has been
/// right-multiplied by the accumulated rotations.
fn jacobi(a: &mut ComplexMatrix, mut v: Option<&mut ComplexMatrix>) -> Result<()> {
    let n = a.n();
    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm();
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(a) <= threshold {
            return Ok(());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau.abs() > 1e150 {
                    0.5 / tau
                } else {
                    let t = 1.0 / (tau.abs() + (tau * tau + 1.0).sqrt());
                    if tau < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = [[c, s e^{i phi}], [-s e^{-i phi}, c]] on (p, q); A <- G* A G.
                let g_pq = phase * s;
                let g_qp = -phase.conj() * s;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * g_qp.conj();
                    a[(q, k)] = apk * g_pq.conj() + aqk * c;
                }
                a[(p, p)] = Complex64::new(app - t * r, 0.0);
                a[(q, q)] = Complex64::new(aqq + t * r, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c + vkq * g_qp;
                        v[(k, q)] = vkp * g_pq + vkq * c;
                    }
                }
            }
        }
    }
    if off_diagonal_norm(a) <= threshold {
        Ok(())
    } else {
        Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
    }
}

/// Singular values in ascending order, as square roots of the eigenvalues of
/// `T*T` (negative roundoff clamped to zero).
pub fn singular_values(t: &ComplexMatrix) -> Result<Vec<f64>> {
    let gram = &t.adjoint() * t;
    let eig = eigenvalues_of_hermitian_part(&gram)?;
    Ok(eig.into_iter().map(|l| l.max(0.0).sqrt()).collect())
}

/// Singular values of a Hermitian matrix, read off as `|lambda|`.
pub(crate) fn hermitian_singular_values(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let mut s: Vec<f64> = eigenvalues_of_hermitian_part(h)?
        .into_iter()
        .map(f64::abs)
        .collect();
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// Operator absolute value `|T| = (T*T)^{1/2}`.
pub fn abs_op(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let gram = &t.adjoint() * t;
    let eig = herm_eig(&gram)?;
    Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let entries = (0..n * n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::new(n, entries).unwrap()
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        random_matrix(rng, n).hermitian_part()
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let a = ComplexMatrix::from_real_rows(&[vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let eig = herm_eig(&a).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let eig = herm_eig(&a).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert_eq!(herm_eigenvalues(&a).unwrap(), vec![-1.0, 1.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(herm_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn reconstruction_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 3, 4, 7, 12] {
            let a = random_hermitian(&mut rng, n);
            let eig = herm_eig(&a).unwrap();
            let scale = a.frobenius_norm().max(1.0);
            assert!((&eig.reconstruct() - &a).frobenius_norm() <= 1e-10 * scale);
            let v = &eig.eigenvectors;
            let vv = &v.adjoint() * v;
            assert!((&vv - &ComplexMatrix::identity(n)).frobenius_norm() <= 1e-10);
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn two_by_two_matches_characteristic_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = random_hermitian(&mut rng, 2);
            let p = a[(0, 0)].re;
            let q = a[(1, 1)].re;
            let b2 = a[(0, 1)].norm_sqr();
            // lambda^2 - (p + q) lambda + (pq - |b|^2) = 0
            let tr = p + q;
            let det = p * q - b2;
            let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
            let roots = [(tr - disc) / 2.0, (tr + disc) / 2.0];
            let eig = herm_eig(&a).unwrap();
            for (x, y) in eig.eigenvalues.iter().zip(roots) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn singular_values_examples() {
        let t = ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(singular_values(&t).unwrap(), vec![0.0, 2.0]);

        // A unitary: rotation by a phase times a real rotation.
        let (c, s) = (0.6, 0.8);
        let u = ComplexMatrix::from_rows(&[
            vec![Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
            vec![Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
        ])
        .unwrap();
        for sv in singular_values(&u).unwrap() {
            assert!((sv - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_values_square_sum_is_frobenius() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..8 {
            let t = random_matrix(&mut rng, n);
            let sum: f64 = singular_values(&t).unwrap().iter().map(|s| s * s).sum();
            let fro2 = t.frobenius_norm().powi(2);
            assert!((sum - fro2).abs() < 1e-10 * fro2.max(1.0));
        }
    }

    #[test]
    fn abs_op_examples() {
        let t = ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let abs = abs_op(&t).unwrap();
        assert_eq!(abs, ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![0.0, 2.0]]).unwrap());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = random_matrix(&mut rng, 4);
        let psd = &b.adjoint() * &b;
        assert!(abs_op(&psd).unwrap().relative_distance(&psd) < 1e-10);
    }

    #[test]
    fn abs_op_squares_to_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..9 {
            let t = random_matrix(&mut rng, n);
            let abs = abs_op(&t).unwrap();
            assert!(abs.is_exactly_hermitian());
            let gram = &t.adjoint() * &t;
            let scale = gram.frobenius_norm().max(1.0);
            assert!((&abs.square() - &gram).frobenius_norm() <= 1e-9 * scale);
            assert!(herm_eigenvalues(&abs).unwrap()[0] >= -1e-12);
        }
    }

    #[test]
    fn rotated_abs_has_cosine_real_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let t = random_matrix(&mut rng, 4);
        let abs = abs_op(&t).unwrap();
        for k in 0..16 {
            let theta = k as f64 * 0.41;
            let lhs = abs.rotate(theta).real_part();
            let rhs = abs.scale_real(theta.cos());
            assert!((&lhs - &rhs).frobenius_norm() <= 1e-12);
        }
    }

    #[test]
    fn zero_matrix_is_trivial() {
        let z = ComplexMatrix::zeros(3);
        assert_eq!(herm_eigenvalues(&z).unwrap(), vec![0.0; 3]);
        assert!(abs_op(&z).unwrap().is_zero());
    }
}
