//! Necessary conditions for `dw_N(T) = w_N(T)` and `dw_N(T) = N^2(|T|)`.
//!
//! When either equality holds numerically, the predicted consequence is
//! checked and reported. The converse is never asserted.

use serde::{Deserialize, Serialize};

use super::{NormedProfile, OperatorProfile};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::norms::NormSpec;

/// Which consequence of `dw_N(T) = w_N(T)` was observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityBranch {
    /// `T = 0`.
    Zero,
    /// `w_N(T) = N(Re(iT)) = N(Re(-iT))`.
    ImaginaryAxis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualityDiagnostics {
    pub dw_n: f64,
    pub w_n: f64,
    /// `N^2(|T|)`.
    pub abs_norm_squared: f64,
    /// Slack used to decide that an equality holds.
    pub tolerance: f64,
    /// Set when `dw_N(T) = w_N(T)` holds.
    pub radius_equality: Option<EqualityBranch>,
    /// `||T + T*||_F / max(1, ||T||_F)`, set when `dw_N(T) = N^2(|T|)` holds.
    pub anti_hermitian_residual: Option<f64>,
}

/// Runs both checks. Fails with [`Error::DiagnosticFailed`] when an equality
/// holds but its consequence does not.
pub fn equality_diagnostics(t: &ComplexMatrix, norm: &NormSpec) -> Result<EqualityDiagnostics> {
    let profile = OperatorProfile::new(t.clone())?;
    diagnose(&profile.normed(*norm))
}

/// [`equality_diagnostics`] on cached profile data.
pub fn diagnose(p: &NormedProfile<'_>) -> Result<EqualityDiagnostics> {
    let (t, norm) = (p.operator().matrix(), p.norm());
    let dw_n = p.dw_n()?.value;
    let w_n = p.w_n()?.value;
    let abs_norm_squared = p.n_abs()?.powi(2);
    let scale = p.n_t()?.max(abs_norm_squared).max(1.0);
    let tolerance = 1e-8 * scale;
    // Near-equality only pins the consequences to first order in sqrt(tol).
    let consequence_tol = 10.0 * ((t.n() as f64) * tolerance).sqrt();

    let radius_equality = if (dw_n - w_n).abs() <= tolerance {
        let fro_scale = t.frobenius_norm().max(1.0);
        if t.frobenius_norm() <= tolerance * fro_scale {
            Some(EqualityBranch::Zero)
        } else {
            let on_axis = norm.eval(&t.rotate(std::f64::consts::FRAC_PI_2).real_part())?;
            let opposite = norm.eval(&t.rotate(-std::f64::consts::FRAC_PI_2).real_part())?;
            if (w_n - on_axis.max(opposite)).abs() <= consequence_tol * scale {
                Some(EqualityBranch::ImaginaryAxis)
            } else {
                return Err(Error::DiagnosticFailed(format!(
                    "dw_N = w_N = {w_n} but T != 0 and max N(Re(+-iT)) = {}",
                    on_axis.max(opposite)
                )));
            }
        }
    } else {
        None
    };

    let anti_hermitian_residual = if (dw_n - abs_norm_squared).abs() <= tolerance {
        let residual = (t + &t.adjoint()).frobenius_norm() / t.frobenius_norm().max(1.0);
        if residual > consequence_tol {
            return Err(Error::DiagnosticFailed(format!(
                "dw_N = N^2(|T|) = {abs_norm_squared} but ||T + T*||_F = {residual}"
            )));
        }
        Some(residual)
    } else {
        None
    };

    Ok(EqualityDiagnostics {
        dw_n,
        w_n,
        abs_norm_squared,
        tolerance,
        radius_equality,
        anti_hermitian_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anti_hermitian_rotation_generator() {
        let k = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let d = equality_diagnostics(&k, &NormSpec::operator()).unwrap();
        assert!((d.dw_n - 1.0).abs() < 1e-10);
        assert!((d.abs_norm_squared - 1.0).abs() < 1e-12);
        assert_eq!(d.anti_hermitian_residual, Some(0.0));
        assert_eq!(d.radius_equality, Some(EqualityBranch::ImaginaryAxis));
    }

    #[test]
    fn zero_matrix_reports_zero_branch() {
        let d = equality_diagnostics(&ComplexMatrix::zeros(3), &NormSpec::frobenius()).unwrap();
        assert_eq!(d.radius_equality, Some(EqualityBranch::Zero));
        assert_eq!(d.anti_hermitian_residual, Some(0.0));
    }

    #[test]
    fn nilpotent_is_vacuous() {
        let t = ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let d = equality_diagnostics(&t, &NormSpec::operator()).unwrap();
        assert!((d.dw_n - 17f64.sqrt()).abs() < 1e-10);
        assert_eq!(d.radius_equality, None);
        assert_eq!(d.anti_hermitian_residual, None);
    }
}
