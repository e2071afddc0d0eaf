//! Complex matrix arithmetic and Hermitian spectral kernels.

mod eigen;
mod io;
mod matrix;

pub use eigen::{
    abs_op, herm_eig, herm_eigenvalues, singular_values, HermEig, HERMITIAN_TOL, MAX_SWEEPS,
    OFF_DIAGONAL_TOL,
};
pub(crate) use eigen::{eigenvalues_of_hermitian_part, hermitian_singular_values};
pub use io::MatrixFile;
pub use matrix::ComplexMatrix;
