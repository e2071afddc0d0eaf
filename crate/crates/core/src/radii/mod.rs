//! Numerical radius `w`, generalized numerical radius `w_N`, Davis-Wielandt
//! radius `dw` and its generalization `dw_N`.
//!
//! `w_N` and `dw_N` are suprema over an angle and are computed with the
//! grid-and-refine search in [`theta`]. The classical `dw` is a supremum over
//! unit vectors and goes through the multi-start [`sphere`] optimizer. The
//! [`oracle`] functions are sampling estimates used only for cross-checks.

pub mod oracle;
pub mod sphere;
pub mod theta;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{abs_op, eigenvalues_of_hermitian_part, ComplexMatrix};
use crate::norms::NormSpec;

pub use oracle::{brute_force_dw, brute_force_w};
pub use sphere::SphereSearch;
pub use theta::{ThetaOptimum, ThetaSearch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "w")]
    W,
    #[serde(rename = "w_N")]
    WN,
    #[serde(rename = "dw")]
    Dw,
    #[serde(rename = "dw_N")]
    DwN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ThetaSup,
    SphereOpt,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Theta(ThetaOptimum),
    /// Unit vector attaining the value.
    Vector(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub quantity: Quantity,
    pub value: f64,
    pub witness: Witness,
    pub method: Method,
    pub est_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RadiusResult {
    fn zero_theta(quantity: Quantity, norm: &NormSpec, search: &ThetaSearch) -> Self {
        Self {
            quantity,
            value: 0.0,
            witness: Witness::Theta(ThetaOptimum {
                value: 0.0,
                theta_star: 0.0,
                grid_points: search.grid_points,
                bracket_width: 0.0,
            }),
            method: Method::ThetaSup,
            est_error: 0.0,
            norm: Some(norm.to_string()),
            seed: None,
        }
    }

    fn from_theta(quantity: Quantity, norm: &NormSpec, out: theta::ThetaOutcome) -> Self {
        Self {
            quantity,
            value: out.optimum.value,
            witness: Witness::Theta(out.optimum),
            method: Method::ThetaSup,
            est_error: out.est_error,
            norm: Some(norm.to_string()),
            seed: None,
        }
    }

    pub fn theta_star(&self) -> Option<f64> {
        match &self.witness {
            Witness::Theta(t) => Some(t.theta_star),
            Witness::Vector(_) => None,
        }
    }
}

/// `Re(e^{i theta} T) = cos(theta) Re(T) - sin(theta) Im(T)`, with both parts
/// precomputed so each angle costs one linear combination.
pub(crate) struct RotatedRealPart {
    re: ComplexMatrix,
    im: ComplexMatrix,
    scratch: ComplexMatrix,
}

impl RotatedRealPart {
    pub(crate) fn new(t: &ComplexMatrix) -> Self {
        Self {
            re: t.real_part(),
            im: t.imag_part(),
            scratch: ComplexMatrix::zeros(t.n()),
        }
    }

    pub(crate) fn at(&mut self, theta: f64) -> &ComplexMatrix {
        let (s, c) = theta.sin_cos();
        self.scratch.set_linear_combination(c, &self.re, -s, &self.im);
        &self.scratch
    }

    /// `Im(e^{i theta} T) = sin(theta) Re(T) + cos(theta) Im(T)`.
    pub(crate) fn imag_at(&mut self, theta: f64) -> &ComplexMatrix {
        let (s, c) = theta.sin_cos();
        self.scratch.set_linear_combination(s, &self.re, c, &self.im);
        &self.scratch
    }
}

/// `w_N(T) = sup_theta N(Re(e^{i theta} T))`.
pub fn generalized_numerical_radius(t: &ComplexMatrix, norm: &NormSpec) -> Result<RadiusResult> {
    generalized_numerical_radius_with(t, norm, &ThetaSearch::default())
}

pub fn generalized_numerical_radius_with(
    t: &ComplexMatrix,
    norm: &NormSpec,
    search: &ThetaSearch,
) -> Result<RadiusResult> {
    if has_closed_form(t) {
        return w_closed_form(t, norm, search);
    }
    let grid = real_part_grid(t, norm, search)?;
    w_from_grid(t, norm, &grid, search)
}

/// Zero and exactly Hermitian inputs: `Re(e^{i theta} H) = cos(theta) H`, so
/// every supremum over the angle sits at `theta = 0`.
pub(crate) fn has_closed_form(t: &ComplexMatrix) -> bool {
    t.is_zero() || t.is_exactly_hermitian()
}

fn closed_form(quantity: Quantity, norm: &NormSpec, value: f64, search: &ThetaSearch) -> RadiusResult {
    let mut r = RadiusResult::zero_theta(quantity, norm, search);
    r.value = value;
    if let Witness::Theta(opt) = &mut r.witness {
        opt.value = value;
    }
    r
}

fn w_closed_form(t: &ComplexMatrix, norm: &NormSpec, search: &ThetaSearch) -> Result<RadiusResult> {
    let value = if t.is_zero() { 0.0 } else { norm.eval(t)? };
    Ok(closed_form(Quantity::WN, norm, value, search))
}

/// `N(Re(e^{i theta_k} T))` on the grid of `search`.
pub(crate) fn real_part_grid(t: &ComplexMatrix, norm: &NormSpec, search: &ThetaSearch) -> Result<Vec<f64>> {
    let mut family = RotatedRealPart::new(t);
    theta::sample_grid(|th| norm.eval(family.at(th)), search)
}

/// Eigenvalues of `Re(e^{i theta_k} T)` on the grid of `search`. Any norm's
/// [`real_part_grid`] follows from these without another decomposition.
pub(crate) fn real_part_spectra(t: &ComplexMatrix, search: &ThetaSearch) -> Result<Vec<Vec<f64>>> {
    let mut family = RotatedRealPart::new(t);
    let g = theta::grid_len(search);
    (0..g)
        .map(|k| eigenvalues_of_hermitian_part(family.at(theta::grid_angle(k, g))))
        .collect()
}

/// [`real_part_grid`] from [`real_part_spectra`].
pub(crate) fn grid_from_spectra(spectra: &[Vec<f64>], norm: &NormSpec) -> Vec<f64> {
    spectra.iter().map(|ev| norm.eval_hermitian_spectrum(ev)).collect()
}

/// `w_N(T)` from a precomputed [`real_part_grid`].
pub(crate) fn w_from_grid(
    t: &ComplexMatrix,
    norm: &NormSpec,
    grid: &[f64],
    search: &ThetaSearch,
) -> Result<RadiusResult> {
    let mut family = RotatedRealPart::new(t);
    let out = theta::maximize_from_grid(grid, |th| norm.eval(family.at(th)), search)?;
    Ok(RadiusResult::from_theta(Quantity::WN, norm, out))
}

/// `w(T)`, the generalized radius for the operator norm.
pub fn numerical_radius(t: &ComplexMatrix) -> Result<RadiusResult> {
    let norm = NormSpec::operator();
    let mut r = generalized_numerical_radius(t, &norm)?;
    r.quantity = Quantity::W;
    Ok(r)
}

/// `dw_N(T) = sup_theta sqrt(N^2(Re(e^{i theta} T)) + cos^4(theta) N^4(|T|))`.
///
/// Uses `Re(e^{i theta}|T|) = cos(theta)|T|`, so `|T|` and its norm are
/// computed once.
pub fn generalized_dw_radius(t: &ComplexMatrix, norm: &NormSpec) -> Result<RadiusResult> {
    generalized_dw_radius_with(t, norm, &ThetaSearch::default())
}

pub fn generalized_dw_radius_with(
    t: &ComplexMatrix,
    norm: &NormSpec,
    search: &ThetaSearch,
) -> Result<RadiusResult> {
    if t.is_zero() {
        return Ok(RadiusResult::zero_theta(Quantity::DwN, norm, search));
    }
    let abs_norm = norm.eval(&abs_op(t)?)?;
    dw_from_abs_norm(t, norm, abs_norm, search)
}

/// [`generalized_dw_radius`] when `N(|T|)` is already known.
pub(crate) fn dw_from_abs_norm(
    t: &ComplexMatrix,
    norm: &NormSpec,
    abs_norm: f64,
    search: &ThetaSearch,
) -> Result<RadiusResult> {
    if has_closed_form(t) {
        return dw_closed_form(t, norm, abs_norm, search);
    }
    let grid = real_part_grid(t, norm, search)?;
    dw_from_grid(t, norm, abs_norm, &grid, search)
}

pub(crate) fn dw_closed_form(
    t: &ComplexMatrix,
    norm: &NormSpec,
    abs_norm: f64,
    search: &ThetaSearch,
) -> Result<RadiusResult> {
    let value = if t.is_zero() {
        0.0
    } else {
        let n = norm.eval(t)?;
        (n * n + abs_norm.powi(4)).sqrt()
    };
    Ok(closed_form(Quantity::DwN, norm, value, search))
}

/// `dw_N(T)` from a precomputed [`real_part_grid`].
pub(crate) fn dw_from_grid(
    t: &ComplexMatrix,
    norm: &NormSpec,
    abs_norm: f64,
    grid: &[f64],
    search: &ThetaSearch,
) -> Result<RadiusResult> {
    let abs4 = abs_norm.powi(4);
    let g = grid.len();
    let dw_grid: Vec<f64> = grid
        .iter()
        .enumerate()
        .map(|(k, re)| (re * re + theta::grid_angle(k, g).cos().powi(4) * abs4).sqrt())
        .collect();
    let mut family = RotatedRealPart::new(t);
    let out = theta::maximize_from_grid(
        &dw_grid,
        |th| {
            let re = norm.eval(family.at(th))?;
            Ok((re * re + th.cos().powi(4) * abs4).sqrt())
        },
        search,
    )?;
    Ok(RadiusResult::from_theta(Quantity::DwN, norm, out))
}

/// `dw_N(T)` through imaginary parts:
/// `sup_theta sqrt(N^2(Im(e^{i theta} T)) + sin^4(theta) N^4(|T|))`.
///
/// The imaginary part is formed directly from the rotated matrix, not from
/// the real-part family, so this serves as an independent cross-check.
pub fn imag_form_dw_radius(t: &ComplexMatrix, norm: &NormSpec) -> Result<RadiusResult> {
    let search = ThetaSearch::default();
    if t.is_zero() {
        return Ok(RadiusResult::zero_theta(Quantity::DwN, norm, &search));
    }
    let abs4 = norm.eval(&abs_op(t)?)?.powi(4);
    let out = theta::maximize(
        |th| {
            let im = norm.eval(&t.rotate(th).imag_part())?;
            Ok((im * im + th.sin().powi(4) * abs4).sqrt())
        },
        &search,
    )?;
    Ok(RadiusResult::from_theta(Quantity::DwN, norm, out))
}

/// `|<Tx, x>|^2 + ||Tx||^4` for a unit vector `x`.
pub fn dw_objective(t: &ComplexMatrix, x: &[Complex64]) -> f64 {
    let tx = t.apply(x);
    let inner: Complex64 = tx.iter().zip(x).map(|(a, b)| a * b.conj()).sum();
    let norm2: f64 = tx.iter().map(|z| z.norm_sqr()).sum();
    inner.norm_sqr() + norm2 * norm2
}

/// Classical `dw(T) = sup_{||x|| = 1} sqrt(|<Tx, x>|^2 + ||Tx||^4)`.
pub fn classical_dw_radius(t: &ComplexMatrix) -> Result<RadiusResult> {
    classical_dw_radius_with(t, &SphereSearch::default())
}

pub fn classical_dw_radius_with(t: &ComplexMatrix, search: &SphereSearch) -> Result<RadiusResult> {
    let n = t.n();
    if t.is_zero() {
        let mut e1 = vec![Complex64::new(0.0, 0.0); n];
        e1[0] = Complex64::new(1.0, 0.0);
        return Ok(RadiusResult {
            quantity: Quantity::Dw,
            value: 0.0,
            witness: Witness::Vector(e1),
            method: Method::SphereOpt,
            est_error: 0.0,
            norm: None,
            seed: Some(search.seed),
        });
    }
    let mut tx = vec![Complex64::new(0.0, 0.0); n];
    let out = sphere::maximize(
        n,
        |x| {
            t.apply_into(x, &mut tx);
            let inner: Complex64 = tx.iter().zip(x).map(|(a, b)| a * b.conj()).sum();
            let norm2: f64 = tx.iter().map(|z| z.norm_sqr()).sum();
            inner.norm_sqr() + norm2 * norm2
        },
        search,
    )?;
    let value = out.value.sqrt();
    Ok(RadiusResult {
        quantity: Quantity::Dw,
        value,
        witness: Witness::Vector(out.vector),
        method: Method::SphereOpt,
        // Coordinate steps stop at `min_step`; the objective is smooth on the sphere.
        est_error: (search.min_step * value).max(1e-10),
        norm: None,
        seed: Some(search.seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn nilpotent() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let entries = (0..n * n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::new(n, entries).unwrap()
    }

    #[test]
    fn nilpotent_numerical_radius_is_half_entry() {
        let r = generalized_numerical_radius(&nilpotent(), &NormSpec::operator()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!((numerical_radius(&nilpotent()).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_radius_is_norm_at_zero_angle() {
        let h = ComplexMatrix::from_rows(&[
            vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, -1.0)],
            vec![Complex64::new(1.0, 1.0), Complex64::new(-3.0, 0.0)],
        ])
        .unwrap();
        for norm in [NormSpec::operator(), NormSpec::frobenius(), NormSpec::trace()] {
            let r = generalized_numerical_radius(&h, &norm).unwrap();
            assert_eq!(r.theta_star(), Some(0.0));
            assert!((r.value - norm.eval(&h).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_matrix_short_circuits() {
        let z = ComplexMatrix::zeros(3);
        let norm = NormSpec::operator();
        assert_eq!(generalized_numerical_radius(&z, &norm).unwrap().value, 0.0);
        assert_eq!(generalized_dw_radius(&z, &norm).unwrap().value, 0.0);
        assert_eq!(imag_form_dw_radius(&z, &norm).unwrap().value, 0.0);
        assert_eq!(classical_dw_radius(&z).unwrap().value, 0.0);
    }

    #[test]
    fn identity_values() {
        let i = ComplexMatrix::identity(3);
        assert!((numerical_radius(&i).unwrap().value - 1.0).abs() < 1e-15);
        let dw = generalized_dw_radius(&i, &NormSpec::operator()).unwrap();
        assert!((dw.value - 2f64.sqrt()).abs() < 1e-12);
        let classical = classical_dw_radius(&i).unwrap();
        assert!((classical.value - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn normal_matrix_radius_is_spectral_radius() {
        // Diagonal normal matrix with complex spectrum.
        let d = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.1), Complex64::new(0.0, -1.5)];
        let t = ComplexMatrix::from_diagonal(&d);
        let expected = d.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((numerical_radius(&t).unwrap().value - expected).abs() < 1e-8);
    }

    #[test]
    fn nilpotent_dw_values() {
        let t = nilpotent();
        let dw_n = generalized_dw_radius(&t, &NormSpec::operator()).unwrap();
        assert!((dw_n.value.powi(2) - 17.0).abs() < 1e-10);
        let imag = imag_form_dw_radius(&t, &NormSpec::operator()).unwrap();
        assert!((imag.value.powi(2) - 17.0).abs() < 1e-10);
        let dw = classical_dw_radius(&t).unwrap();
        assert!((dw.value.powi(2) - 16.0).abs() < 1e-6);
        if let Witness::Vector(x) = &dw.witness {
            assert!((dw_objective(&t, x) - dw.value.powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_classical_dw() {
        // 4t^2 + 16t^2 with t = |y|^2 peaks at t = 1.
        let t = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert!((classical_dw_radius(&t).unwrap().value - 20f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn witness_reproduces_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let t = random_matrix(&mut rng, 3);
        let norm = NormSpec::trace();
        let r = generalized_dw_radius(&t, &norm).unwrap();
        let th = r.theta_star().unwrap();
        assert!((0.0..PI).contains(&th));
        let abs4 = norm.eval(&abs_op(&t).unwrap()).unwrap().powi(4);
        let re = norm.eval(&t.rotate(th).real_part()).unwrap();
        let v = (re * re + th.cos().powi(4) * abs4).sqrt();
        assert!((v - r.value).abs() <= r.est_error.max(1e-12));
    }

    #[test]
    fn rotation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let t = random_matrix(&mut rng, 3);
        let dw = classical_dw_radius(&t).unwrap().value;
        for norm in [NormSpec::operator(), NormSpec::frobenius(), NormSpec::schatten(3.0).unwrap()] {
            let w = generalized_numerical_radius(&t, &norm).unwrap().value;
            for phi in [0.3, 1.7, 2.9, -0.8] {
                let tr = t.rotate(phi);
                assert!((generalized_numerical_radius(&tr, &norm).unwrap().value - w).abs() <= 1e-8);
            }
        }
        for phi in [0.3, 1.7] {
            assert!((classical_dw_radius(&t.rotate(phi)).unwrap().value - dw).abs() <= 1e-8);
        }
    }

    #[test]
    fn generalized_dw_is_not_rotation_invariant() {
        // The |T| term does not rotate with T: dw_N(iI) = 1 but dw_N(I) = sqrt 2.
        let i = ComplexMatrix::identity(2);
        let norm = NormSpec::operator();
        let plain = generalized_dw_radius(&i, &norm).unwrap().value;
        let turned = generalized_dw_radius(&i.rotate(PI / 2.0), &norm).unwrap().value;
        assert!((plain - 2f64.sqrt()).abs() < 1e-12);
        assert!((turned - 1.0).abs() < 1e-12);
    }

    #[test]
    fn imag_form_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for n in 2..5 {
            let t = random_matrix(&mut rng, n);
            for norm in [NormSpec::operator(), NormSpec::trace()] {
                let a = generalized_dw_radius(&t, &norm).unwrap().value;
                let b = imag_form_dw_radius(&t, &norm).unwrap().value;
                assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn oracle_never_exceeds_refined_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for n in 2..4 {
            let t = random_matrix(&mut rng, n);
            let w = numerical_radius(&t).unwrap();
            let bf = brute_force_w(&t, 20_000, 3);
            assert!(bf <= w.value + w.est_error);
            let dw = classical_dw_radius(&t).unwrap();
            assert!(brute_force_dw(&t, 20_000, 3) <= dw.value + 1e-8);
        }
    }
}
