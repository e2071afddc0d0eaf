//! Python bindings. Structured results are handed over as plain dicts and
//! lists built from the library's JSON form.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use dwradius::bounds::{self, BoundId};
use dwradius::harness::{self, FuzzConfig};
use dwradius::linalg::MatrixFile;
use dwradius::radii::{self, SphereSearch};
use dwradius::{reference_cases, ComplexMatrix, Error};

fn py_err(e: Error) -> PyErr {
    if e.is_numerical() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Square complex matrix.
#[pyclass(name = "Matrix", module = "pydwradius", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMatrix {
    inner: ComplexMatrix,
}

#[pymethods]
impl PyMatrix {
    /// Builds a matrix from a list of rows of numbers (real or complex).
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self { inner: ComplexMatrix::from_rows(&rows).map_err(py_err)? })
    }

    /// Parses the `{"n", "re", "im"}` JSON matrix format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: MatrixFile::parse(text).map_err(py_err)? })
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Self { inner: ComplexMatrix::identity(n) }
    }

    /// Random matrix of a named class (`ginibre`, `hermitian`, `projection`, ...).
    #[staticmethod]
    #[pyo3(signature = (class_name, n, seed=0))]
    fn random(class_name: &str, n: usize, seed: u64) -> PyResult<Self> {
        let class = class_name.parse().map_err(py_err)?;
        if n == 0 {
            return Err(PyValueError::new_err("dimension must be positive"));
        }
        Ok(Self { inner: harness::gen_matrix(class, n, &mut ChaCha8Rng::seed_from_u64(seed)) })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn to_json(&self) -> String {
        MatrixFile::to_json(&self.inner)
    }

    fn tolist(&self) -> Vec<Vec<Complex64>> {
        (0..self.inner.n()).map(|i| self.inner.row(i).to_vec()).collect()
    }

    fn adjoint(&self) -> Self {
        Self { inner: self.inner.adjoint() }
    }

    /// `|T| = (T*T)^{1/2}`.
    fn abs(&self) -> PyResult<Self> {
        Ok(Self { inner: dwradius::linalg::abs_op(&self.inner).map_err(py_err)? })
    }

    fn __getitem__(&self, idx: (usize, usize)) -> PyResult<Complex64> {
        let n = self.inner.n();
        if idx.0 >= n || idx.1 >= n {
            return Err(pyo3::exceptions::PyIndexError::new_err("index out of range"));
        }
        Ok(self.inner[idx])
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Matrix(n={}, {})", self.inner.n(), self.to_json())
    }
}

/// Matrix norm: `op`, `fro`, `tr`, `sp:<p>` or `w`.
#[pyclass(name = "Norm", module = "pydwradius", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyNorm {
    inner: dwradius::NormSpec,
}

#[pymethods]
impl PyNorm {
    #[new]
    #[pyo3(signature = (spec="op"))]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self { inner: spec.parse().map_err(py_err)? })
    }

    #[getter]
    fn self_adjoint(&self) -> bool {
        self.inner.is_self_adjoint()
    }

    #[getter]
    fn algebra(&self) -> bool {
        self.inner.is_algebra()
    }

    fn __call__(&self, m: &PyMatrix) -> PyResult<f64> {
        self.inner.eval(&m.inner).map_err(py_err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Norm('{}')", self.inner)
    }
}

/// Accepts a `Norm` or its string form.
#[derive(FromPyObject)]
enum NormArg {
    Norm(PyNorm),
    Spec(String),
}

impl NormArg {
    fn spec(&self) -> PyResult<dwradius::NormSpec> {
        match self {
            NormArg::Norm(n) => Ok(n.inner),
            NormArg::Spec(s) => s.parse().map_err(py_err),
        }
    }
}

fn default_norm() -> NormArg {
    NormArg::Spec("op".into())
}

/// `w(T)` with its witness, as a dict.
#[pyfunction]
fn numerical_radius<'py>(py: Python<'py>, t: &PyMatrix) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &radii::numerical_radius(&t.inner).map_err(py_err)?)
}

/// `w_N(T)`.
#[pyfunction]
#[pyo3(signature = (t, norm=default_norm()))]
fn w_n<'py>(py: Python<'py>, t: &PyMatrix, norm: NormArg) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &radii::generalized_numerical_radius(&t.inner, &norm.spec()?).map_err(py_err)?)
}

/// `dw_N(T)`.
#[pyfunction]
#[pyo3(signature = (t, norm=default_norm()))]
fn dw_n<'py>(py: Python<'py>, t: &PyMatrix, norm: NormArg) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &radii::generalized_dw_radius(&t.inner, &norm.spec()?).map_err(py_err)?)
}

/// `dw_N(T)` through its imaginary-part form; agrees with [`dw_n`].
#[pyfunction]
#[pyo3(signature = (t, norm=default_norm()))]
fn dw_n_imag_form<'py>(py: Python<'py>, t: &PyMatrix, norm: NormArg) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &radii::imag_form_dw_radius(&t.inner, &norm.spec()?).map_err(py_err)?)
}

/// Classical `dw(T)` by multi-start search on the unit sphere.
#[pyfunction]
#[pyo3(signature = (t, seed=None))]
fn classical_dw<'py>(py: Python<'py>, t: &PyMatrix, seed: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    let search = seed.map(SphereSearch::with_seed).unwrap_or_default();
    to_py(py, &radii::classical_dw_radius_with(&t.inner, &search).map_err(py_err)?)
}

/// Sampling estimate of `w(T)`.
#[pyfunction]
#[pyo3(signature = (t, samples=100_000, seed=0))]
fn brute_force_w(py: Python<'_>, t: &PyMatrix, samples: usize, seed: u64) -> f64 {
    py.detach(|| radii::brute_force_w(&t.inner, samples, seed))
}

/// Evaluates one catalog bound; `s` is the second operator of the triangle bounds.
#[pyfunction]
#[pyo3(signature = (bound, t, s=None, norm=default_norm()))]
fn evaluate_bound<'py>(
    py: Python<'py>,
    bound: &str,
    t: &PyMatrix,
    s: Option<&PyMatrix>,
    norm: NormArg,
) -> PyResult<Bound<'py, PyAny>> {
    let id: BoundId = bound.parse().map_err(py_err)?;
    let r = bounds::evaluate_bound(id, &t.inner, s.map(|m| &m.inner), &norm.spec()?).map_err(py_err)?;
    to_py(py, &r)
}

/// Evaluates the whole catalog.
#[pyfunction]
#[pyo3(signature = (t, s=None, norm=default_norm()))]
fn evaluate_all<'py>(
    py: Python<'py>,
    t: &PyMatrix,
    s: Option<&PyMatrix>,
    norm: NormArg,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::evaluate_all(&t.inner, s.map(|m| &m.inner), &norm.spec()?).map_err(py_err)?)
}

/// Names of every catalog bound.
#[pyfunction]
fn bound_ids() -> Vec<&'static str> {
    BoundId::ALL.iter().map(|b| b.as_str()).collect()
}

/// `(m1, m2, d1, d2)`.
#[pyfunction]
#[pyo3(signature = (t, norm=default_norm()))]
fn compute_md(t: &PyMatrix, norm: NormArg) -> PyResult<(f64, f64, f64, f64)> {
    let md = bounds::compute_md(&t.inner, &norm.spec()?).map_err(py_err)?;
    Ok((md.m1, md.m2, md.d1, md.d2))
}

/// Value of the upper bound on `dw_N` that fails in general.
#[pyfunction]
#[pyo3(signature = (t, norm=default_norm()))]
fn refuted_upper_value(t: &PyMatrix, norm: NormArg) -> PyResult<f64> {
    bounds::refuted_upper_value(&t.inner, &norm.spec()?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (t, norm=default_norm()))]
fn equality_diagnostics<'py>(py: Python<'py>, t: &PyMatrix, norm: NormArg) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::equality_diagnostics(&t.inner, &norm.spec()?).map_err(py_err)?)
}

/// Runs the verification campaign and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (
    seed=42,
    dims=vec![2, 3, 5],
    classes="all",
    norms="op,fro,tr,sp:3,w",
    count=200,
    tolerance=None,
    oracle_samples=100_000,
))]
#[allow(clippy::too_many_arguments)]
fn run_fuzz<'py>(
    py: Python<'py>,
    seed: u64,
    dims: Vec<usize>,
    classes: &str,
    norms: &str,
    count: usize,
    tolerance: Option<f64>,
    oracle_samples: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = FuzzConfig {
        seed,
        dims,
        classes: harness::parse_class_list(classes).map_err(py_err)?,
        norms: dwradius::norms::parse_norm_list(norms).map_err(py_err)?,
        count_per_cell: count,
        tolerance,
        oracle_samples,
    };
    let report = py.detach(|| harness::run_fuzz(&cfg)).map_err(py_err)?;
    to_py(py, &report)
}

/// The worked examples, one dict per check.
#[pyfunction]
fn paper_examples<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &reference_cases::paper_examples().map_err(py_err)?)
}

#[pymodule]
fn pydwradius(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyNorm>()?;
    m.add_function(wrap_pyfunction!(numerical_radius, m)?)?;
    m.add_function(wrap_pyfunction!(w_n, m)?)?;
    m.add_function(wrap_pyfunction!(dw_n, m)?)?;
    m.add_function(wrap_pyfunction!(dw_n_imag_form, m)?)?;
    m.add_function(wrap_pyfunction!(classical_dw, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_w, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_bound, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_all, m)?)?;
    m.add_function(wrap_pyfunction!(bound_ids, m)?)?;
    m.add_function(wrap_pyfunction!(compute_md, m)?)?;
    m.add_function(wrap_pyfunction!(refuted_upper_value, m)?)?;
    m.add_function(wrap_pyfunction!(equality_diagnostics, m)?)?;
    m.add_function(wrap_pyfunction!(run_fuzz, m)?)?;
    m.add_function(wrap_pyfunction!(paper_examples, m)?)?;
    Ok(())
}
