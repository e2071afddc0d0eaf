//! Pluggable matrix norms `N(.)` with the capability flags that decide which
//! inequalities apply to them.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_singular_values, singular_values, ComplexMatrix};
use crate::radii;

/// Largest Schatten exponent accepted; beyond this use the operator norm.
pub const MAX_SCHATTEN_P: f64 = 64.0;

/// Absolute and relative slack for [`check_norm_axioms`].
pub const AXIOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Operator,
    Frobenius,
    Trace,
    Schatten(f64),
    NumericalRadius,
}

/// A norm together with the properties it is claimed to have.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    kind: NormKind,
    self_adjoint: bool,
    algebra: bool,
}

impl NormSpec {
    pub fn new(kind: NormKind) -> Result<Self> {
        if let NormKind::Schatten(p) = kind {
            if !(1.0..=MAX_SCHATTEN_P).contains(&p) {
                return Err(Error::InvalidNorm(format!(
                    "schatten exponent {p} outside [1, {MAX_SCHATTEN_P}]"
                )));
            }
        }
        let algebra = !matches!(kind, NormKind::NumericalRadius);
        Ok(Self {
            kind,
            self_adjoint: true,
            algebra,
        })
    }

    pub fn operator() -> Self {
        Self::new(NormKind::Operator).unwrap()
    }

    pub fn frobenius() -> Self {
        Self::new(NormKind::Frobenius).unwrap()
    }

    pub fn trace() -> Self {
        Self::new(NormKind::Trace).unwrap()
    }

    pub fn schatten(p: f64) -> Result<Self> {
        Self::new(NormKind::Schatten(p))
    }

    pub fn numerical_radius() -> Self {
        Self::new(NormKind::NumericalRadius).unwrap()
    }

    /// Overrides the capability flags. Used to probe what happens when a
    /// norm is credited with properties it does not have.
    pub fn with_claimed_flags(mut self, self_adjoint: bool, algebra: bool) -> Self {
        self.self_adjoint = self_adjoint;
        self.algebra = algebra;
        self
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.self_adjoint
    }

    pub fn is_algebra(&self) -> bool {
        self.algebra
    }

    /// Evaluates `N(T)`.
    pub fn eval(&self, t: &ComplexMatrix) -> Result<f64> {
        if t.is_zero() {
            return Ok(0.0);
        }
        match self.kind {
            NormKind::Frobenius => Ok(t.frobenius_norm()),
            NormKind::NumericalRadius => {
                if t.is_exactly_hermitian() {
                    // w(A) = ||A|| for normal A.
                    Ok(largest(&hermitian_singular_values(t)?))
                } else {
                    Ok(radii::numerical_radius(t)?.value)
                }
            }
            _ => {
                let sv = if t.is_exactly_hermitian() {
                    hermitian_singular_values(t)?
                } else {
                    singular_values(t)?
                };
                Ok(self.of_singular_values(&sv))
            }
        }
    }

    /// `N(H)` for Hermitian `H` from its eigenvalues. Every supported norm is
    /// spectral on Hermitian input, with `w(H) = ||H||`.
    pub(crate) fn eval_hermitian_spectrum(&self, eigenvalues: &[f64]) -> f64 {
        let mut sv: Vec<f64> = eigenvalues.iter().map(|l| l.abs()).collect();
        sv.sort_by(f64::total_cmp);
        match self.kind {
            NormKind::NumericalRadius => largest(&sv),
            _ => self.of_singular_values(&sv),
        }
    }

    /// Applies a unitarily invariant norm to a singular value list.
    fn of_singular_values(&self, sv: &[f64]) -> f64 {
        match self.kind {
            NormKind::Operator => largest(sv),
            NormKind::Frobenius => sv.iter().map(|s| s * s).sum::<f64>().sqrt(),
            NormKind::Trace => sv.iter().sum(),
            NormKind::Schatten(p) => schatten_sum(sv, p),
            NormKind::NumericalRadius => unreachable!("not unitarily invariant"),
        }
    }
}

fn largest(sv: &[f64]) -> f64 {
    sv.iter().copied().fold(0.0, f64::max)
}

/// `(sum s^p)^{1/p}`, scaled by the largest value to avoid overflow.
fn schatten_sum(sv: &[f64], p: f64) -> f64 {
    let top = largest(sv);
    if top == 0.0 {
        return 0.0;
    }
    let sum: f64 = sv.iter().map(|s| (s / top).powf(p)).sum();
    top * sum.powf(1.0 / p)
}

/// Free-function form of [`NormSpec::eval`].
pub fn eval_norm(norm: &NormSpec, t: &ComplexMatrix) -> Result<f64> {
    norm.eval(t)
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NormKind::Operator => write!(f, "op"),
            NormKind::Frobenius => write!(f, "fro"),
            NormKind::Trace => write!(f, "tr"),
            NormKind::Schatten(p) => write!(f, "sp:{p}"),
            NormKind::NumericalRadius => write!(f, "w"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// `"op" | "fro" | "tr" | "sp:<p>" | "w"`
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "op" => Ok(Self::operator()),
            "fro" => Ok(Self::frobenius()),
            "tr" => Ok(Self::trace()),
            "w" => Ok(Self::numerical_radius()),
            _ => {
                let p = s
                    .strip_prefix("sp:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidNorm(s.to_string()))?;
                Self::schatten(p)
            }
        }
    }
}

/// Parses a comma separated list such as `"op,fro,sp:3"`.
pub fn parse_norm_list(s: &str) -> Result<Vec<NormSpec>> {
    let norms = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>>>()?;
    if norms.is_empty() {
        return Err(Error::InvalidNorm(s.to_string()));
    }
    Ok(norms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Homogeneity,
    Triangle,
    SelfAdjoint,
    Submultiplicative,
}

/// One failed axiom instance: `lhs <= rhs` (or `lhs == rhs`) did not hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    /// Sample indices involved (the second equals the first for unary checks).
    pub indices: (usize, usize),
    pub lhs: f64,
    pub rhs: f64,
}

/// Spot-checks the norm axioms and the claimed capability flags on a sample.
pub fn check_norm_axioms(norm: &NormSpec, sample: &[ComplexMatrix]) -> Result<Vec<AxiomViolation>> {
    if sample.is_empty() {
        return Err(Error::InvalidConfig("axiom check needs a non-empty sample".into()));
    }
    let tol = |scale: f64| AXIOM_TOL + AXIOM_TOL * scale.abs();
    let scalars = [
        Complex64::new(2.5, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 0.7),
        Complex64::new(1.0 / 3.0, -2.0 / 3.0),
        Complex64::new(0.0, 0.0),
    ];
    let values = sample.iter().map(|t| norm.eval(t)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();

    for (i, t) in sample.iter().enumerate() {
        for &z in &scalars {
            let lhs = norm.eval(&t.scale(z))?;
            let rhs = z.norm() * values[i];
            if (lhs - rhs).abs() > tol(rhs) {
                out.push(AxiomViolation {
                    axiom: Axiom::Homogeneity,
                    indices: (i, i),
                    lhs,
                    rhs,
                });
            }
        }
        if norm.is_self_adjoint() {
            let lhs = norm.eval(&t.adjoint())?;
            if (lhs - values[i]).abs() > tol(values[i]) {
                out.push(AxiomViolation {
                    axiom: Axiom::SelfAdjoint,
                    indices: (i, i),
                    lhs,
                    rhs: values[i],
                });
            }
        }
    }

    for i in 0..sample.len() {
        for j in i..sample.len() {
            if sample[i].n() != sample[j].n() {
                continue;
            }
            let lhs = norm.eval(&(&sample[i] + &sample[j]))?;
            let rhs = values[i] + values[j];
            if lhs > rhs + tol(rhs) {
                out.push(AxiomViolation {
                    axiom: Axiom::Triangle,
                    indices: (i, j),
                    lhs,
                    rhs,
                });
            }
        }
    }

    if norm.is_algebra() {
        for i in 0..sample.len() {
            for j in 0..sample.len() {
                if sample[i].n() != sample[j].n() {
                    continue;
                }
                let lhs = norm.eval(&(&sample[i] * &sample[j]))?;
                let rhs = values[i] * values[j];
                if lhs > rhs + tol(rhs) {
                    out.push(AxiomViolation {
                        axiom: Axiom::Submultiplicative,
                        indices: (i, j),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Ok(out)
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

    fn all_norms() -> Vec<NormSpec> {
        vec![
            NormSpec::operator(),
            NormSpec::frobenius(),
            NormSpec::trace(),
            NormSpec::schatten(1.5).unwrap(),
            NormSpec::schatten(3.0).unwrap(),
            NormSpec::numerical_radius(),
        ]
    }

    #[test]
    fn flags_follow_kind() {
        for n in all_norms() {
            assert!(n.is_self_adjoint());
            assert_eq!(n.is_algebra(), n.kind() != NormKind::NumericalRadius);
        }
    }

    #[test]
    fn grammar_round_trips() {
        for s in ["op", "fro", "tr", "sp:3", "sp:1.5", "w"] {
            let n: NormSpec = s.parse().unwrap();
            assert_eq!(n.to_string(), s);
        }
        assert!("sp:0.5".parse::<NormSpec>().is_err());
        assert!("sp:65".parse::<NormSpec>().is_err());
        assert!("sp:".parse::<NormSpec>().is_err());
        assert!("max".parse::<NormSpec>().is_err());
        assert_eq!(parse_norm_list("op, fro,w").unwrap().len(), 3);
        assert!(parse_norm_list("").is_err());
    }

    #[test]
    fn documented_values() {
        let t = ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(NormSpec::operator().eval(&t).unwrap(), 2.0);
        let i2 = ComplexMatrix::identity(2);
        assert!((NormSpec::frobenius().eval(&i2).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let d = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert!((NormSpec::schatten(1.0).unwrap().eval(&d).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(NormSpec::trace().eval(&d).unwrap(), 3.0);
    }

    #[test]
    fn numerical_radius_norm_of_nilpotent() {
        let t = ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let w = NormSpec::numerical_radius().eval(&t).unwrap();
        assert!((w - 1.0).abs() < 1e-10);
    }

    #[test]
    fn self_adjoint_and_schatten_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..6 {
            let t = random_matrix(&mut rng, n);
            for norm in all_norms() {
                let a = norm.eval(&t).unwrap();
                let b = norm.eval(&t.adjoint()).unwrap();
                assert!((a - b).abs() <= 1e-10 * a.max(1.0), "{norm} n={n}");
            }
            let tr = NormSpec::trace().eval(&t).unwrap();
            let fro = NormSpec::frobenius().eval(&t).unwrap();
            let op = NormSpec::operator().eval(&t).unwrap();
            let sp = |p: f64| NormSpec::schatten(p).unwrap().eval(&t).unwrap();
            assert!((sp(1.0) - tr).abs() < 1e-10);
            assert!((sp(2.0) - fro).abs() < 1e-10);
            assert!(sp(64.0) >= op - 1e-10);
            let ps = [1.0, 1.5, 2.0, 3.0, 8.0, 64.0];
            for w in ps.windows(2) {
                assert!(sp(w[0]) >= sp(w[1]) - 1e-10);
            }
        }
    }

    #[test]
    fn numerical_radius_is_equivalent_to_operator_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for n in 1..6 {
            let t = random_matrix(&mut rng, n);
            let op = NormSpec::operator().eval(&t).unwrap();
            let w = NormSpec::numerical_radius().eval(&t).unwrap();
            assert!(0.5 * op <= w + 1e-10 && w <= op + 1e-10);
        }
    }

    #[test]
    fn builtin_norms_pass_axiom_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let sample: Vec<_> = (0..6).map(|_| random_matrix(&mut rng, 3)).collect();
        for norm in all_norms() {
            let v = check_norm_axioms(&norm, &sample).unwrap();
            assert!(v.is_empty(), "{norm}: {v:?}");
        }
    }

    #[test]
    fn numerical_radius_is_not_submultiplicative() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let b = a.adjoint();
        let forced = NormSpec::numerical_radius().with_claimed_flags(true, true);
        let v = check_norm_axioms(&forced, &[a, b]).unwrap();
        let sub: Vec<_> = v.iter().filter(|v| v.axiom == Axiom::Submultiplicative).collect();
        assert!(!sub.is_empty());
        // w(AB) = 1 against w(A) w(B) = 1/4.
        assert!(sub.iter().any(|v| (v.lhs - 1.0).abs() < 1e-8 && (v.rhs - 0.25).abs() < 1e-8));
    }

    #[test]
    fn zero_sample_has_no_violations() {
        for norm in all_norms() {
            assert!(check_norm_axioms(&norm, &[ComplexMatrix::zeros(2)]).unwrap().is_empty());
        }
        assert!(check_norm_axioms(&NormSpec::operator(), &[]).is_err());
    }
}
