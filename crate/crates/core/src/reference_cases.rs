//! Worked examples with known values, reproduced from scratch.
//!
//! Each check compares a computed value with its expected value under an
//! absolute tolerance. One quoted value, `sqrt(17)` for the refined lower
//! bound on the nilpotent example, is wrong; that check is reported as
//! [`CheckStatus::ExpectedDiscrepancy`] next to a check against direct
//! substitution into the formula.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundId, OperatorProfile};
use crate::error::Result;
use crate::harness::{gen_matrix, MatrixClass};
use crate::linalg::ComplexMatrix;
use crate::norms::NormSpec;
use crate::radii::{self, brute_force_w};

/// Sampling budget of the independent `w` estimate.
const ORACLE_SAMPLES: usize = 100_000;
const ORACLE_SEED: u64 = 2024;
/// Seed of the random 3x3 orthogonal projection.
const PROJECTION_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    ExpectedDiscrepancy,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::ExpectedDiscrepancy => "EXPECTED-DISCREPANCY",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReferenceCheck {
    fn new(name: &str, expected: f64, computed: f64, tolerance: f64) -> Self {
        let ok = (computed - expected).abs() <= tolerance;
        Self {
            name: name.to_string(),
            expected,
            computed,
            tolerance,
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            note: None,
        }
    }
}

/// `T = [[0, 2], [0, 0]]`.
pub fn nilpotent_example() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).expect("valid")
}

/// The random orthogonal projection used by the projection checks.
pub fn projection_example() -> ComplexMatrix {
    gen_matrix(MatrixClass::Projection, 3, &mut ChaCha8Rng::seed_from_u64(PROJECTION_SEED))
}

/// Largest singular value of a 2x2 matrix: `s1 + s2 = sqrt(f + 2|det|)` and
/// `s1 - s2 = sqrt(f - 2|det|)` with `f` the squared Frobenius norm.
fn op_norm_2x2(a: &ComplexMatrix) -> f64 {
    let f: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum();
    let det = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).norm();
    0.5 * ((f + 2.0 * det).sqrt() + (f - 2.0 * det).max(0.0).sqrt())
}

/// Square root of a 2x2 positive semidefinite matrix:
/// `sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M))`.
fn sqrt_psd_2x2(m: &ComplexMatrix) -> ComplexMatrix {
    let s = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re.max(0.0).sqrt();
    let t = (m.trace().re + 2.0 * s).sqrt();
    if t == 0.0 {
        return ComplexMatrix::zeros(2);
    }
    (m + &ComplexMatrix::identity(2).scale_real(s)).scale_real(1.0 / t)
}

/// The refined lower bound with `N(T^2 + T*^2)`, recomputed for a 2x2
/// matrix under the operator norm without the library's spectral code or
/// angle search.
pub fn substituted_eqp2_2x2(t: &ComplexMatrix) -> f64 {
    assert_eq!(t.n(), 2, "closed forms are 2x2 only");
    let adj = t.adjoint();
    let re = (t + &adj).scale_real(0.5);
    let im = (t - &adj).scale(Complex64::new(0.0, -0.5));
    let abs = sqrt_psd_2x2(&(&adj * t));
    let y = &(t * t) + &(&adj * &adj);

    let n_re2 = op_norm_2x2(&re).powi(2);
    let n_im2 = op_norm_2x2(&im).powi(2);
    let n_abs4 = op_norm_2x2(&abs).powi(4);
    let w2 = brute_force_w(t, ORACLE_SAMPLES, ORACLE_SEED).powi(2);
    let a = n_re2 + n_abs4;
    let (m1, m2) = (a.max(w2), n_im2.max(n_abs4));
    let (d1, d2) = ((a - w2).abs(), (n_im2 - n_abs4).abs());
    0.5 * (0.5 * op_norm_2x2(&y) + w2 + 2.0 * n_abs4 + d1 + d2 + 2.0 * (m1 - m2).abs()).sqrt()
}

/// Runs every reference check.
pub fn paper_examples() -> Result<Vec<ReferenceCheck>> {
    let op = NormSpec::operator();
    let sqrt17 = 17f64.sqrt();
    let mut checks = Vec::new();

    let t = nilpotent_example();
    let profile = OperatorProfile::new(t.clone())?;
    let p = profile.normed(op);
    checks.push(ReferenceCheck::new("nilpotent: dw_N^2 (operator norm)", 17.0, p.dw_n()?.value.powi(2), 1e-6));
    checks.push(ReferenceCheck::new(
        "nilpotent: classical dw^2 (sphere search)",
        16.0,
        profile.classical_dw()?.value.powi(2),
        1e-4,
    ));
    checks.push(ReferenceCheck::new("nilpotent: w", 1.0, profile.numerical_radius()?.value, 1e-8));
    checks.push(ReferenceCheck::new("nilpotent: || |T| ||", 2.0, profile.abs_op_norm()?, 0.0));
    checks.push(ReferenceCheck::new(
        "nilpotent: ||Re T||^2 + || |T| ||^4",
        17.0,
        p.n_re()?.powi(2) + p.n_abs()?.powi(4),
        1e-12,
    ));

    let md = p.md()?;
    for (name, expected, got) in [
        ("nilpotent: m1", 17.0, md.m1),
        ("nilpotent: m2", 16.0, md.m2),
        ("nilpotent: d1", 16.0, md.d1),
        ("nilpotent: d2", 15.0, md.d2),
    ] {
        checks.push(ReferenceCheck::new(name, expected, got, 0.0));
    }

    let ev = bounds::Evaluator::new(&p);
    let thm22 = ev.evaluate(BoundId::Thm22)?;
    checks.push(ReferenceCheck::new("nilpotent: B_THM22 bound value", sqrt17, thm22.bound_value(), 1e-8));
    checks.push(ReferenceCheck::new("nilpotent: B_THM22 margin", 0.0, thm22.margin, 1e-8));
    checks.push(ReferenceCheck::new(
        "nilpotent: B_LOW bound value",
        3f64.sqrt(),
        ev.evaluate(BoundId::Low)?.bound_value(),
        1e-8,
    ));
    checks.push(ReferenceCheck::new(
        "nilpotent: B_THM28 bound value",
        sqrt17,
        ev.evaluate(BoundId::Thm28)?.bound_value(),
        1e-8,
    ));
    checks.push(ReferenceCheck::new(
        "nilpotent: B_EQP1 bound value",
        sqrt17,
        ev.evaluate(BoundId::Eqp1)?.bound_value(),
        1e-8,
    ));
    let eqp2 = ev.evaluate(BoundId::Eqp2)?.bound_value();
    let mut substituted = ReferenceCheck::new(
        "nilpotent: B_EQP2 bound value vs direct substitution",
        substituted_eqp2_2x2(&t),
        eqp2,
        1e-8,
    );
    substituted.note = Some(format!("closed form 1/2 sqrt(66) = {:.9}", 0.5 * 66f64.sqrt()));
    checks.push(substituted);
    checks.push(ReferenceCheck::new(
        "nilpotent: B_EQP2 bound value is 1/2 sqrt(66)",
        0.5 * 66f64.sqrt(),
        eqp2,
        1e-8,
    ));
    let mut stated = ReferenceCheck::new("nilpotent: B_EQP2 bound value vs stated sqrt(17)", sqrt17, eqp2, 1e-8);
    if stated.status == CheckStatus::Fail {
        stated.status = CheckStatus::ExpectedDiscrepancy;
        stated.note = Some(format!(
            "T^2 = T*^2 = 0, so N(T^2 + T*^2) = 0 and the bound is 1/2 sqrt(66) = {eqp2:.9}, not sqrt(17) = {sqrt17:.9}; the inequality itself holds"
        ));
    }
    checks.push(stated);

    let i = ComplexMatrix::identity(2);
    let dw_i = radii::generalized_dw_radius(&i, &op)?.value;
    let refuted_i = bounds::refuted_upper_value(&i, &op)?;
    checks.push(ReferenceCheck::new("identity: dw_N (operator norm)", 2f64.sqrt(), dw_i, 1e-9));
    checks.push(ReferenceCheck::new("identity: refuted upper bound value", 1.0, refuted_i, 1e-9));
    let mut gap = ReferenceCheck::new(
        "identity: dw_N minus refuted upper bound",
        2f64.sqrt() - 1.0,
        dw_i - refuted_i,
        2e-9,
    );
    gap.note = Some("positive gap: the upper bound fails".into());
    checks.push(gap);

    let proj = projection_example();
    let pp = OperatorProfile::new(proj)?;
    let pn = pp.normed(op);
    let pev = bounds::Evaluator::new(&pn);
    checks.push(ReferenceCheck::new("projection: dw_N^2 (operator norm)", 2.0, pn.dw_n()?.value.powi(2), 1e-9));
    checks.push(ReferenceCheck::new("projection: B_EQB1 margin", 0.0, pev.evaluate(BoundId::Eqb1)?.margin, 1e-6));
    checks.push(ReferenceCheck::new("projection: B_EQB2 margin", 0.0, pev.evaluate(BoundId::Eqb2)?.margin, 1e-6));

    Ok(checks)
}

/// `true` when no check failed; expected discrepancies do not count.
pub fn all_pass(checks: &[ReferenceCheck]) -> bool {
    checks.iter().all(|c| c.status != CheckStatus::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_match_library() {
        let t = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.5), Complex64::new(-0.3, 2.0)],
            vec![Complex64::new(0.7, 0.0), Complex64::new(0.0, -1.0)],
        ])
        .unwrap();
        let op = NormSpec::operator();
        assert!((op_norm_2x2(&t) - op.eval(&t).unwrap()).abs() < 1e-12);
        let abs = crate::linalg::abs_op(&t).unwrap();
        assert!(sqrt_psd_2x2(&(&t.adjoint() * &t)).relative_distance(&abs) < 1e-12);
    }

    #[test]
    fn substituted_formula_on_nilpotent() {
        let v = substituted_eqp2_2x2(&nilpotent_example());
        assert!((v - 0.5 * 66f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn projection_is_nontrivial() {
        let p = projection_example();
        assert!(!p.is_zero());
        assert!((&p.square() - &p).frobenius_norm() < 1e-12);
    }
}
