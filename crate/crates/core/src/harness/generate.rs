use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::ComplexMatrix;

/// Structural families of random test matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixClass {
    Ginibre,
    Hermitian,
    AntiHermitian,
    Normal,
    Unitary,
    Nilpotent,
    Projection,
    Rank1,
    Diagonal,
}

impl MatrixClass {
    pub const ALL: [MatrixClass; 9] = [
        MatrixClass::Ginibre,
        MatrixClass::Hermitian,
        MatrixClass::AntiHermitian,
        MatrixClass::Normal,
        MatrixClass::Unitary,
        MatrixClass::Nilpotent,
        MatrixClass::Projection,
        MatrixClass::Rank1,
        MatrixClass::Diagonal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MatrixClass::Ginibre => "ginibre",
            MatrixClass::Hermitian => "hermitian",
            MatrixClass::AntiHermitian => "anti_hermitian",
            MatrixClass::Normal => "normal",
            MatrixClass::Unitary => "unitary",
            MatrixClass::Nilpotent => "nilpotent",
            MatrixClass::Projection => "projection",
            MatrixClass::Rank1 => "rank1",
            MatrixClass::Diagonal => "diagonal",
        }
    }

    /// Position in [`MatrixClass::ALL`]; part of the per-cell stream id.
    pub fn ordinal(self) -> u64 {
        MatrixClass::ALL.iter().position(|&c| c == self).expect("listed") as u64
    }
}

impl fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        MatrixClass::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == key)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown matrix class `{s}`")))
    }
}

/// Parses `all` or a comma-separated list of class names.
pub fn parse_class_list(s: &str) -> Result<Vec<MatrixClass>, Error> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(MatrixClass::ALL.to_vec());
    }
    let classes = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<MatrixClass>, Error>>()?;
    if classes.is_empty() {
        return Err(Error::InvalidConfig("empty class list".into()));
    }
    Ok(classes)
}

/// Standard complex Gaussian: `E|z|^2 = 1`.
fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

fn ginibre(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::new(n, gaussian_vector(rng, n * n)).expect("finite entries")
}

/// Columns of a Haar-distributed unitary. Gram-Schmidt (two passes) leaves a
/// positive real diagonal in `R`, which is what makes `Q` Haar distributed.
fn haar_columns(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Complex64>> {
    loop {
        let g = ginibre(rng, n);
        let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut degenerate = false;
        for j in 0..n {
            let mut v = g.column(j);
            for _ in 0..2 {
                for qi in &q {
                    let r: Complex64 = qi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vk, qk) in v.iter_mut().zip(qi) {
                        *vk -= r * qk;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                degenerate = true;
                break;
            }
            v.iter_mut().for_each(|z| *z /= norm);
            q.push(v);
        }
        if !degenerate {
            return q;
        }
    }
}

fn from_columns(cols: &[Vec<Complex64>]) -> ComplexMatrix {
    let n = cols.len();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for (j, c) in cols.iter().enumerate() {
        for (i, z) in c.iter().enumerate() {
            data[i * n + j] = *z;
        }
    }
    ComplexMatrix::new(n, data).expect("finite entries")
}

/// `U diag(d) U*` from unitary columns.
fn conjugate_diagonal(cols: &[Vec<Complex64>], d: &[Complex64]) -> ComplexMatrix {
    let n = cols.len();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = (0..n).map(|k| cols[k][i] * d[k] * cols[k][j].conj()).sum();
        }
    }
    ComplexMatrix::new(n, data).expect("finite entries")
}

/// Draws one matrix of `class`. The draw consumes `rng` deterministically.
///
/// # Panics
/// If `dim` is zero.
pub fn gen_matrix(class: MatrixClass, dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    assert!(dim >= 1, "dimension must be positive");
    let n = dim;
    match class {
        MatrixClass::Ginibre => ginibre(rng, n),
        MatrixClass::Hermitian => ginibre(rng, n).hermitian_part(),
        MatrixClass::AntiHermitian => ginibre(rng, n).hermitian_part().scale(Complex64::i()),
        MatrixClass::Normal => {
            let cols = haar_columns(rng, n);
            let d = gaussian_vector(rng, n);
            conjugate_diagonal(&cols, &d)
        }
        MatrixClass::Unitary => from_columns(&haar_columns(rng, n)),
        MatrixClass::Nilpotent => {
            let mut data = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                for j in i + 1..n {
                    data[i * n + j] = gaussian(rng);
                }
            }
            ComplexMatrix::new(n, data).expect("finite entries")
        }
        MatrixClass::Projection => {
            let rank = rng.random_range(1..=n);
            let cols = haar_columns(rng, n);
            let d: Vec<Complex64> = (0..n)
                .map(|k| Complex64::new(if k < rank { 1.0 } else { 0.0 }, 0.0))
                .collect();
            conjugate_diagonal(&cols, &d).hermitian_part()
        }
        MatrixClass::Rank1 => {
            let x = gaussian_vector(rng, n);
            let y = gaussian_vector(rng, n);
            let data = (0..n * n).map(|k| x[k / n] * y[k % n].conj()).collect();
            ComplexMatrix::new(n, data).expect("finite entries")
        }
        MatrixClass::Diagonal => ComplexMatrix::from_diagonal(&gaussian_vector(rng, n)),
    }
}
