use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds an `n x n` matrix from row-major entries.
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(k) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "entry ({}, {}) is not finite",
                k / n,
                k % n
            )));
        }
        Ok(Self { n, data: entries })
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// `(T + T*) / 2`.
    pub fn real_part(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
            }
        }
        out
    }

    /// `(T - T*) / (2i)`.
    pub fn imag_part(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let d = self.data[i * n + j] - self.data[j * n + i].conj();
                // d / (2i) = -i d / 2
                out.data[i * n + j] = Complex64::new(d.im, -d.re) * 0.5;
            }
        }
        out
    }

    /// Multiplies every entry by `e^{i theta}`.
    pub fn rotate(&self, theta: f64) -> Self {
        self.scale(Complex64::from_polar(1.0, theta))
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&a| a * z).collect(),
        }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&a| a * x).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Frobenius norm of `A - A*`.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[i * n + j] - self.data[j * n + i].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `true` when the matrix equals its adjoint bit for bit.
    pub fn is_exactly_hermitian(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (i..n).all(|j| self.data[i * n + j] == self.data[j * n + i].conj()))
    }

    /// Symmetrized copy `(A + A*) / 2`, identical to [`Self::real_part`].
    pub fn hermitian_part(&self) -> Self {
        self.real_part()
    }

    /// `self * self`.
    pub fn square(&self) -> Self {
        self * self
    }

    /// Relative Frobenius distance `||A - B||_F / max(1, ||B||_F)`.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm() / other.frobenius_norm().max(1.0)
    }

    /// Writes `c * a + s * b` into `self` (all of the same size).
    pub(crate) fn set_linear_combination(&mut self, c: f64, a: &Self, s: f64, b: &Self) {
        for ((o, x), y) in self.data.iter_mut().zip(&a.data).zip(&b.data) {
            *o = x * c + y * s;
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        self.apply_into(x, &mut y);
        y
    }

    pub(crate) fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.n;
        for (i, yi) in y.iter_mut().enumerate().take(n) {
            let row = &self.data[i * n..(i + 1) * n];
            *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_of_i_is_minus_i() {
        let t = ComplexMatrix::new(1, vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(t.adjoint().entries(), &[c(0.0, -1.0)]);
    }

    #[test]
    fn real_and_imag_parts_of_nilpotent() {
        let t = ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let re = t.real_part();
        let im = t.imag_part();
        assert_eq!(
            re,
            ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
        );
        let expected_im =
            ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]])
                .unwrap();
        assert_eq!(im, expected_im);
    }

    #[test]
    fn hermitian_has_zero_imaginary_part() {
        let h = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, -3.0)], vec![c(1.0, 3.0), c(-1.0, 0.0)]])
            .unwrap();
        assert_eq!(h.real_part(), h);
        assert!(h.imag_part().is_zero());
        assert_eq!(h.adjoint(), h);
    }

    #[test]
    fn anti_hermitian_has_zero_real_part() {
        let k = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0), c(1.0, 2.0)], vec![c(-1.0, 2.0), c(0.0, -4.0)]])
            .unwrap();
        assert!(k.real_part().is_zero());
    }

    #[test]
    fn rotate_identity_by_quarter_turn() {
        let r = ComplexMatrix::identity(3).rotate(std::f64::consts::FRAC_PI_2);
        let expected = ComplexMatrix::identity(3).scale(c(0.0, 1.0));
        assert!(r.relative_distance(&expected) < 1e-15);
        let t = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(t.rotate(0.0), t);
    }

    #[test]
    fn rejects_bad_shapes_and_non_finite() {
        assert!(ComplexMatrix::new(2, vec![c(0.0, 0.0); 3]).is_err());
        assert!(ComplexMatrix::new(0, vec![]).is_err());
        assert!(ComplexMatrix::new(1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn product_matches_hand_computation() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let prod = &a * &a.adjoint();
        assert_eq!(prod, ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap());
        assert!(a.square().is_zero());
    }
}
