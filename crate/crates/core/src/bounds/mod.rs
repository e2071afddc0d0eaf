//! Catalog of inequalities between `w`, `w_N`, `dw` and `dw_N`, evaluated as
//! `lhs <= rhs` on concrete matrices.
//!
//! Quantities shared between bounds (norms of `|T|`, `w_N(T)`, `dw_N(T)`,
//! the classical `dw(T)`, ...) are computed lazily and cached in an
//! [`OperatorProfile`] (norm independent) and a [`NormedProfile`] (one per
//! norm), so evaluating the whole catalog costs each supremum once.

mod catalog;
mod diagnostics;

use std::cell::OnceCell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{abs_op, ComplexMatrix};
use crate::norms::{NormKind, NormSpec};
use crate::radii::{self, theta, RadiusResult, RotatedRealPart, SphereSearch, ThetaSearch};

pub use catalog::{BoundId, BoundSide};
pub use diagnostics::{diagnose, equality_diagnostics, EqualityBranch, EqualityDiagnostics};

/// Default slack: a link fails when `lhs > rhs + max(tol, tol * |rhs|)`.
pub const VIOLATION_TOL: f64 = 1e-8;

/// One `lhs <= rhs` comparison inside a bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkReport {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub satisfied: bool,
}

/// Outcome of evaluating one catalog entry. Single inequalities have one
/// link; sandwiches and triangle chains have several, and the top-level
/// `lhs`, `rhs` and `margin` describe the tightest of them. When the bound
/// does not apply, the numbers are zero and `satisfied` is vacuously true.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: BoundId,
    pub side: BoundSide,
    pub lhs: f64,
    pub rhs: f64,
    pub applicable: bool,
    pub satisfied: bool,
    pub margin: f64,
    pub links: Vec<LinkReport>,
}

impl BoundReport {
    fn not_applicable(bound: BoundId) -> Self {
        Self {
            bound,
            side: bound.side(),
            lhs: 0.0,
            rhs: 0.0,
            applicable: false,
            satisfied: true,
            margin: 0.0,
            links: Vec::new(),
        }
    }

    fn from_links(bound: BoundId, links: Vec<LinkReport>) -> Self {
        let tight = links
            .iter()
            .min_by(|a, b| a.margin.total_cmp(&b.margin))
            .expect("at least one link")
            .clone();
        Self {
            bound,
            side: bound.side(),
            lhs: tight.lhs,
            rhs: tight.rhs,
            applicable: true,
            satisfied: links.iter().all(|l| l.satisfied),
            margin: tight.margin,
            links,
        }
    }

    /// The value the inequality provides: `lhs` of a lower bound, `rhs` of an upper one.
    pub fn bound_value(&self) -> f64 {
        match self.side {
            BoundSide::UpperOnDwN | BoundSide::RefutedUpper | BoundSide::Triangle => self.rhs,
            _ => self.lhs,
        }
    }

    pub fn link(&self, label: &str) -> Option<&LinkReport> {
        self.links.iter().find(|l| l.label == label)
    }
}

/// The four auxiliary quantities used by the refined lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MdQuadruple {
    /// `max{N^2(Re T) + N^4(|T|), w_N^2(T)}`
    pub m1: f64,
    /// `max{N^2(Im T), N^4(|T|)}`
    pub m2: f64,
    /// `|N^2(Re T) + N^4(|T|) - w_N^2(T)|`
    pub d1: f64,
    /// `|N^2(Im T) - N^4(|T|)|`
    pub d2: f64,
}

fn cached(cell: &OnceCell<f64>, f: impl FnOnce() -> Result<f64>) -> Result<f64> {
    if let Some(v) = cell.get() {
        return Ok(*v);
    }
    let v = f()?;
    let _ = cell.set(v);
    Ok(v)
}

fn cached_radius(
    cell: &OnceCell<RadiusResult>,
    f: impl FnOnce() -> Result<RadiusResult>,
) -> Result<&RadiusResult> {
    if cell.get().is_none() {
        let v = f()?;
        let _ = cell.set(v);
    }
    Ok(cell.get().expect("just set"))
}

/// Norm-independent data about one operator `T`.
pub struct OperatorProfile {
    t: ComplexMatrix,
    adjoint: ComplexMatrix,
    abs: ComplexMatrix,
    /// `|T|^2 + |T*|^2 = T*T + TT*`
    x: ComplexMatrix,
    /// `T^2 + T*^2`
    y: ComplexMatrix,
    /// `T^2`
    square: ComplexMatrix,
    /// `|T|^4 = (T*T)^2`
    abs4: ComplexMatrix,
    sphere: SphereSearch,
    search: ThetaSearch,
    op_norm: OnceCell<f64>,
    abs_op_norm: OnceCell<f64>,
    w: OnceCell<RadiusResult>,
    dw: OnceCell<RadiusResult>,
    /// Eigenvalues of `Re(e^{i theta_k} T)` and `Re(e^{i theta_k} T^2)` on
    /// the search grid, shared by every norm.
    spectra: OnceCell<Vec<Vec<f64>>>,
    square_spectra: OnceCell<Vec<Vec<f64>>>,
}

impl OperatorProfile {
    pub fn new(t: ComplexMatrix) -> Result<Self> {
        Self::with_searches(t, SphereSearch::default(), ThetaSearch::default())
    }

    pub fn with_searches(t: ComplexMatrix, sphere: SphereSearch, search: ThetaSearch) -> Result<Self> {
        let adjoint = t.adjoint();
        let gram = &adjoint * &t;
        let cogram = &t * &adjoint;
        let square = t.square();
        let adj_square = adjoint.square();
        let abs = abs_op(&t)?;
        Ok(Self {
            x: (&gram + &cogram).hermitian_part(),
            y: (&square + &adj_square).hermitian_part(),
            abs4: gram.square().hermitian_part(),
            abs,
            square,
            adjoint,
            t,
            sphere,
            search,
            op_norm: OnceCell::new(),
            abs_op_norm: OnceCell::new(),
            w: OnceCell::new(),
            dw: OnceCell::new(),
            spectra: OnceCell::new(),
            square_spectra: OnceCell::new(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.t
    }

    pub fn abs(&self) -> &ComplexMatrix {
        &self.abs
    }

    /// `|T|^4`.
    pub fn abs_fourth(&self) -> &ComplexMatrix {
        &self.abs4
    }

    pub fn op_norm(&self) -> Result<f64> {
        cached(&self.op_norm, || NormSpec::operator().eval(&self.t))
    }

    /// `|| |T| ||`.
    pub fn abs_op_norm(&self) -> Result<f64> {
        cached(&self.abs_op_norm, || NormSpec::operator().eval(&self.abs))
    }

    /// `w(T)`.
    pub fn numerical_radius(&self) -> Result<&RadiusResult> {
        cached_radius(&self.w, || {
            let op = NormSpec::operator();
            let mut r = if radii::has_closed_form(&self.t) {
                radii::generalized_numerical_radius_with(&self.t, &op, &self.search)?
            } else {
                let grid = self.real_part_grid(false, &op)?;
                radii::w_from_grid(&self.t, &op, &grid, &self.search)?
            };
            r.quantity = radii::Quantity::W;
            Ok(r)
        })
    }

    /// `N(Re(e^{i theta_k} M))` on the search grid, for `M = T` or `M = T^2`.
    fn real_part_grid(&self, square: bool, norm: &NormSpec) -> Result<Vec<f64>> {
        let m = if square { &self.square } else { &self.t };
        if norm.kind() == NormKind::Frobenius {
            return radii::real_part_grid(m, norm, &self.search);
        }
        let cell = if square { &self.square_spectra } else { &self.spectra };
        if cell.get().is_none() {
            let _ = cell.set(radii::real_part_spectra(m, &self.search)?);
        }
        Ok(radii::grid_from_spectra(cell.get().expect("just set"), norm))
    }

    /// Classical `dw(T)`.
    pub fn classical_dw(&self) -> Result<&RadiusResult> {
        cached_radius(&self.dw, || radii::classical_dw_radius_with(&self.t, &self.sphere))
    }

    pub fn normed(&self, norm: NormSpec) -> NormedProfile<'_> {
        NormedProfile::new(self, norm)
    }
}

/// Norm-dependent data about one operator.
pub struct NormedProfile<'a> {
    op: &'a OperatorProfile,
    norm: NormSpec,
    n_t: OnceCell<f64>,
    n_adj: OnceCell<f64>,
    n_abs: OnceCell<f64>,
    n_re: OnceCell<f64>,
    n_im: OnceCell<f64>,
    n_x: OnceCell<f64>,
    n_y: OnceCell<f64>,
    n_alg: OnceCell<f64>,
    /// `N(Re(e^{i theta_k} T))` on the search grid, shared by `w_N`, `dw_N`
    /// and the refuted bound.
    grid: OnceCell<Vec<f64>>,
    w_n: OnceCell<RadiusResult>,
    dw_n: OnceCell<RadiusResult>,
    w_n_abs: OnceCell<RadiusResult>,
    w_n_x: OnceCell<RadiusResult>,
    w_n_x_abs4: OnceCell<RadiusResult>,
    w_n_square: OnceCell<RadiusResult>,
    refuted: OnceCell<f64>,
}

impl<'a> NormedProfile<'a> {
    pub fn new(op: &'a OperatorProfile, norm: NormSpec) -> Self {
        Self {
            op,
            norm,
            n_t: OnceCell::new(),
            n_adj: OnceCell::new(),
            n_abs: OnceCell::new(),
            n_re: OnceCell::new(),
            n_im: OnceCell::new(),
            n_x: OnceCell::new(),
            n_y: OnceCell::new(),
            n_alg: OnceCell::new(),
            grid: OnceCell::new(),
            w_n: OnceCell::new(),
            dw_n: OnceCell::new(),
            w_n_abs: OnceCell::new(),
            w_n_x: OnceCell::new(),
            w_n_x_abs4: OnceCell::new(),
            w_n_square: OnceCell::new(),
            refuted: OnceCell::new(),
        }
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    pub fn operator(&self) -> &'a OperatorProfile {
        self.op
    }

    fn w_n_of(&self, m: &ComplexMatrix) -> Result<RadiusResult> {
        radii::generalized_numerical_radius_with(m, &self.norm, &self.op.search)
    }

    pub fn n_t(&self) -> Result<f64> {
        cached(&self.n_t, || self.norm.eval(&self.op.t))
    }

    pub fn n_adjoint(&self) -> Result<f64> {
        cached(&self.n_adj, || self.norm.eval(&self.op.adjoint))
    }

    /// `N(|T|)`.
    pub fn n_abs(&self) -> Result<f64> {
        cached(&self.n_abs, || self.norm.eval(&self.op.abs))
    }

    pub fn n_re(&self) -> Result<f64> {
        cached(&self.n_re, || self.norm.eval(&self.op.t.real_part()))
    }

    pub fn n_im(&self) -> Result<f64> {
        cached(&self.n_im, || self.norm.eval(&self.op.t.imag_part()))
    }

    /// `N(|T|^2 + |T*|^2)`.
    pub fn n_x(&self) -> Result<f64> {
        cached(&self.n_x, || self.norm.eval(&self.op.x))
    }

    /// `N(T^2 + T*^2)`.
    pub fn n_y(&self) -> Result<f64> {
        cached(&self.n_y, || self.norm.eval(&self.op.y))
    }

    /// `N(T^2 + 2|T|^4)`.
    pub fn n_alg(&self) -> Result<f64> {
        cached(&self.n_alg, || {
            self.norm.eval(&(&self.op.square + &self.op.abs4.scale_real(2.0)))
        })
    }

    fn grid(&self) -> Result<&[f64]> {
        if self.grid.get().is_none() {
            let g = self.op.real_part_grid(false, &self.norm)?;
            let _ = self.grid.set(g);
        }
        Ok(self.grid.get().expect("just set"))
    }

    pub fn w_n(&self) -> Result<&RadiusResult> {
        cached_radius(&self.w_n, || {
            if radii::has_closed_form(&self.op.t) {
                self.w_n_of(&self.op.t)
            } else {
                radii::w_from_grid(&self.op.t, &self.norm, self.grid()?, &self.op.search)
            }
        })
    }

    pub fn dw_n(&self) -> Result<&RadiusResult> {
        cached_radius(&self.dw_n, || {
            let (t, search) = (&self.op.t, &self.op.search);
            if radii::has_closed_form(t) {
                radii::dw_closed_form(t, &self.norm, self.n_abs()?, search)
            } else {
                radii::dw_from_grid(t, &self.norm, self.n_abs()?, self.grid()?, search)
            }
        })
    }

    /// `w_N(|T|)` by a literal angle search.
    pub fn w_n_abs(&self) -> Result<&RadiusResult> {
        cached_radius(&self.w_n_abs, || self.w_n_of(&self.op.abs))
    }

    /// `w_N(|T|^2 + |T*|^2)`.
    pub fn w_n_x(&self) -> Result<&RadiusResult> {
        cached_radius(&self.w_n_x, || self.w_n_of(&self.op.x))
    }

    /// `w_N(|T|^2 + |T*|^2 + 2|T|^4)`.
    pub fn w_n_x_abs4(&self) -> Result<&RadiusResult> {
        cached_radius(&self.w_n_x_abs4, || {
            self.w_n_of(&(&self.op.x + &self.op.abs4.scale_real(2.0)))
        })
    }

    /// `w_N(T^2)`.
    pub fn w_n_square(&self) -> Result<&RadiusResult> {
        cached_radius(&self.w_n_square, || {
            let sq = &self.op.square;
            if radii::has_closed_form(sq) {
                self.w_n_of(sq)
            } else {
                let grid = self.op.real_part_grid(true, &self.norm)?;
                radii::w_from_grid(sq, &self.norm, &grid, &self.op.search)
            }
        })
    }

    /// `inf_theta sqrt(N^2(Re e^{i theta}T) + N^2(Im e^{i theta}T) + cos^4(theta) N^4(|T|))`.
    pub fn refuted_upper(&self) -> Result<f64> {
        cached(&self.refuted, || {
            let (t, search) = (&self.op.t, &self.op.search);
            let grid = if radii::has_closed_form(t) { None } else { Some(self.grid()?) };
            Ok(refuted_upper_with(t, &self.norm, self.n_abs()?, grid, search)?.value)
        })
    }

    pub fn md(&self) -> Result<MdQuadruple> {
        let re2 = self.n_re()?.powi(2);
        let im2 = self.n_im()?.powi(2);
        let abs4 = self.n_abs()?.powi(4);
        let w2 = self.w_n()?.value.powi(2);
        let a = re2 + abs4;
        Ok(MdQuadruple {
            m1: a.max(w2),
            m2: im2.max(abs4),
            d1: (a - w2).abs(),
            d2: (im2 - abs4).abs(),
        })
    }
}

/// Minimizes the refuted upper bound over the angle. `grid` is the shared
/// real-part grid; `None` for closed-form inputs, where the minimum is `N(T)`
/// at `theta = pi/2`.
fn refuted_upper_with(
    t: &ComplexMatrix,
    norm: &NormSpec,
    abs_norm: f64,
    grid: Option<&[f64]>,
    search: &ThetaSearch,
) -> Result<radii::ThetaOptimum> {
    let g = theta::grid_len(search);
    let Some(grid) = grid else {
        let value = if t.is_zero() { 0.0 } else { norm.eval(t)? };
        return Ok(radii::ThetaOptimum {
            value,
            theta_star: if t.is_zero() { 0.0 } else { std::f64::consts::FRAC_PI_2 },
            grid_points: g,
            bracket_width: 0.0,
        });
    };
    let abs4 = abs_norm.powi(4);
    let mut re_family = RotatedRealPart::new(t);
    let mut im_family = RotatedRealPart::new(t);
    let mut objective = |th: f64| -> Result<f64> {
        let re = norm.eval(re_family.at(th))?;
        let im = norm.eval(im_family.imag_at(th))?;
        Ok((re * re + im * im + th.cos().powi(4) * abs4).sqrt())
    };
    // Im(e^{i theta} T) = Re(e^{i (theta + pi/2)} T), half a grid further on.
    let values = if g.is_multiple_of(2) {
        (0..g)
            .map(|k| {
                let (re, im) = (grid[k], grid[(k + g / 2) % g]);
                (re * re + im * im + theta::grid_angle(k, g).cos().powi(4) * abs4).sqrt()
            })
            .collect()
    } else {
        theta::sample_grid(&mut objective, search)?
    };
    Ok(theta::minimize_from_grid(&values, objective, search)?.optimum)
}

/// Right-hand side of the refuted upper bound on `dw_N(T)`.
pub fn refuted_upper_value(t: &ComplexMatrix, norm: &NormSpec) -> Result<f64> {
    Ok(refuted_upper_optimum(t, norm)?.value)
}

/// Same as [`refuted_upper_value`], with the minimizing angle.
pub fn refuted_upper_optimum(t: &ComplexMatrix, norm: &NormSpec) -> Result<radii::ThetaOptimum> {
    let search = ThetaSearch::default();
    if radii::has_closed_form(t) {
        return refuted_upper_with(t, norm, 0.0, None, &search);
    }
    let abs_norm = norm.eval(&abs_op(t)?)?;
    let grid = radii::real_part_grid(t, norm, &search)?;
    refuted_upper_with(t, norm, abs_norm, Some(&grid), &search)
}

/// `(m1, m2, d1, d2)` for `T` under `N`.
pub fn compute_md(t: &ComplexMatrix, norm: &NormSpec) -> Result<MdQuadruple> {
    let profile = OperatorProfile::new(t.clone())?;
    profile.normed(*norm).md()
}

/// Second operand of a triangle-type bound: profiles for `S` and `T + S`
/// under the same norm as the primary operator.
pub struct Partner<'a> {
    pub other: &'a NormedProfile<'a>,
    pub sum: &'a NormedProfile<'a>,
}

/// Evaluates catalog entries against cached profiles.
pub struct Evaluator<'a> {
    primary: &'a NormedProfile<'a>,
    partner: Option<Partner<'a>>,
    tol: f64,
}

impl<'a> Evaluator<'a> {
    pub fn new(primary: &'a NormedProfile<'a>) -> Self {
        Self {
            primary,
            partner: None,
            tol: VIOLATION_TOL,
        }
    }

    pub fn with_partner(mut self, partner: Partner<'a>) -> Self {
        self.partner = Some(partner);
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn link(&self, label: &str, lhs: f64, rhs: f64) -> LinkReport {
        let slack = self.tol.max(self.tol * rhs.abs());
        LinkReport {
            label: label.to_string(),
            lhs,
            rhs,
            margin: rhs - lhs,
            satisfied: lhs <= rhs + slack,
        }
    }

    pub fn applicable(&self, id: BoundId) -> bool {
        let norm = self.primary.norm();
        !(id.requires_algebra() && !norm.is_algebra()
            || id.requires_self_adjoint() && !norm.is_self_adjoint()
            || id.needs_partner() && self.partner.is_none())
    }

    pub fn evaluate(&self, id: BoundId) -> Result<BoundReport> {
        if !self.applicable(id) {
            return Ok(BoundReport::not_applicable(id));
        }
        let p = self.primary;
        let op = p.operator();
        let single = |lhs: f64, rhs: f64| Ok(BoundReport::from_links(id, vec![self.link("bound", lhs, rhs)]));
        // Lower bounds on dw_N: `value <= dw_N(T)`.
        let lower_dwn = |value: f64| -> Result<BoundReport> { single(value, p.dw_n()?.value) };

        match id {
            BoundId::NormEquiv => {
                let op_norm = op.op_norm()?;
                let w = op.numerical_radius()?.value;
                Ok(BoundReport::from_links(
                    id,
                    vec![self.link("lower", 0.5 * op_norm, w), self.link("upper", w, op_norm)],
                ))
            }
            BoundId::SandwichDw => {
                let w = op.numerical_radius()?.value;
                let abs2 = op.abs_op_norm()?.powi(2);
                let dw = op.classical_dw()?.value;
                Ok(BoundReport::from_links(
                    id,
                    vec![
                        self.link("lower", w.max(abs2), dw),
                        self.link("upper", dw, (w * w + abs2 * abs2).sqrt()),
                    ],
                ))
            }
            BoundId::WnSandwich => {
                let (nt, nadj) = (p.n_t()?, p.n_adjoint()?);
                let w = p.w_n()?.value;
                let mut links = vec![
                    self.link("lower", 0.5 * nt.max(nadj), w),
                    self.link("upper", w, 0.5 * (nt + nadj)),
                ];
                if p.norm().is_self_adjoint() {
                    links.push(self.link("lower_self_adjoint", 0.5 * nt, w));
                    links.push(self.link("upper_self_adjoint", w, nt));
                }
                Ok(BoundReport::from_links(id, links))
            }
            BoundId::Bak => {
                let value = 0.5 * (p.n_x()? - 2.0 * p.w_n_square()?.value).abs().sqrt();
                single(value, p.w_n()?.value)
            }
            BoundId::SandwichDwn => {
                let w = p.w_n()?.value;
                let wa = p.w_n_abs()?.value;
                let dw = p.dw_n()?.value;
                Ok(BoundReport::from_links(
                    id,
                    vec![
                        self.link("lower", w.max(wa * wa), dw),
                        self.link("upper", dw, (w * w + wa.powi(4)).sqrt()),
                    ],
                ))
            }
            BoundId::Low => {
                let nt = p.n_t()?;
                lower_dwn((0.25 * nt * nt + 0.125 * p.n_abs()?.powi(4)).sqrt())
            }
            BoundId::RefutedUp => single(p.dw_n()?.value, p.refuted_upper()?),
            BoundId::Thm22 => {
                let nt = p.n_t()?;
                lower_dwn(0.5 * (nt * nt + 2.0 * p.n_abs()?.powi(4) + 2.0 * self.re_im_gap()?).sqrt())
            }
            BoundId::CorEquac1 => {
                let nt = p.n_t()?;
                lower_dwn(0.5 * (nt * nt + 2.0 * p.n_abs()?.powi(4)).sqrt())
            }
            BoundId::CorAlg => lower_dwn(0.5 * p.n_alg()?.sqrt()),
            BoundId::Eqb1 => lower_dwn(
                0.5 * (p.n_x()? + 2.0 * p.n_abs()?.powi(4) + 2.0 * self.re_im_gap()?).sqrt(),
            ),
            BoundId::Eqb2 => lower_dwn(
                0.5 * (p.n_y()? + 2.0 * p.n_abs()?.powi(4) + 2.0 * self.re_im_gap()?).sqrt(),
            ),
            BoundId::CorWnabs => {
                lower_dwn(0.5 * (p.w_n_x()?.value + 2.0 * p.w_n_abs()?.value.powi(4)).sqrt())
            }
            BoundId::CorWnabs2 => lower_dwn(0.5 * p.w_n_x_abs4()?.value.sqrt()),
            BoundId::WnMax => {
                let value = 0.5 * p.n_x()?.sqrt().max(p.n_y()?.sqrt());
                single(value, p.w_n()?.value)
            }
            BoundId::Thm28 => {
                let nt = p.n_t()?;
                lower_dwn(0.5 * (0.75 * nt * nt + self.md_tail()?).sqrt())
            }
            BoundId::Eqp1 => {
                let w = p.w_n()?.value;
                lower_dwn(0.5 * (0.5 * p.n_x()? + w * w + self.md_tail()?).sqrt())
            }
            BoundId::Eqp2 => {
                let w = p.w_n()?.value;
                lower_dwn(0.5 * (0.5 * p.n_y()? + w * w + self.md_tail()?).sqrt())
            }
            BoundId::Thm29 => {
                let w = p.w_n()?.value;
                lower_dwn(0.5 * (1.5 * w * w + self.md_tail()?).sqrt())
            }
            BoundId::TriDw => {
                let partner = self.partner.as_ref().ok_or_else(|| Error::MissingPartner(id.to_string()))?;
                let (s_op, sum_op) = (partner.other.operator(), partner.sum.operator());
                let dt = op.classical_dw()?.value;
                let ds = s_op.classical_dw()?.value;
                let dsum = sum_op.classical_dw()?.value;
                let fourth = NormSpec::operator().eval(&(op.abs_fourth() + s_op.abs_fourth()))?;
                let middle = (2.0 * (dt * dt + ds * ds) + 6.0 * fourth).sqrt();
                let outer = 2.0 * 2f64.sqrt() * (dt + ds);
                Ok(BoundReport::from_links(
                    id,
                    vec![self.link("sum_le_middle", dsum, middle), self.link("middle_le_outer", middle, outer)],
                ))
            }
            BoundId::TriDwn => {
                let partner = self.partner.as_ref().ok_or_else(|| Error::MissingPartner(id.to_string()))?;
                let dt = p.dw_n()?.value;
                let ds = partner.other.dw_n()?.value;
                let dsum = partner.sum.dw_n()?.value;
                let fourth = p.n_abs()?.powi(4) + partner.other.n_abs()?.powi(4);
                let middle = (2.0 * (dt * dt + ds * ds) + 6.0 * fourth).sqrt();
                let root = 2.0 * 2f64.sqrt() * (dt * dt + ds * ds).sqrt();
                let outer = 2.0 * 2f64.sqrt() * (dt + ds);
                Ok(BoundReport::from_links(
                    id,
                    vec![
                        self.link("sum_le_middle", dsum, middle),
                        self.link("middle_le_root", middle, root),
                        self.link("root_le_outer", root, outer),
                    ],
                ))
            }
        }
    }

    /// `|N^2(Re T) + N^4(|T|) - N^2(Im T)|`.
    fn re_im_gap(&self) -> Result<f64> {
        let p = self.primary;
        Ok((p.n_re()?.powi(2) + p.n_abs()?.powi(4) - p.n_im()?.powi(2)).abs())
    }

    /// `2 N^4(|T|) + d1 + d2 + 2|m1 - m2|`.
    fn md_tail(&self) -> Result<f64> {
        let md = self.primary.md()?;
        Ok(2.0 * self.primary.n_abs()?.powi(4) + md.d1 + md.d2 + 2.0 * (md.m1 - md.m2).abs())
    }

    /// One report per catalog entry, in catalog order.
    pub fn evaluate_all(&self) -> Result<Vec<BoundReport>> {
        BoundId::ALL.iter().map(|&id| self.evaluate(id)).collect()
    }
}

/// Evaluates a single bound on `T` (and `S` for triangle bounds) under `N`.
pub fn evaluate_bound(
    id: BoundId,
    t: &ComplexMatrix,
    s: Option<&ComplexMatrix>,
    norm: &NormSpec,
) -> Result<BoundReport> {
    if id.needs_partner() && s.is_none() {
        return Err(Error::MissingPartner(id.to_string()));
    }
    with_evaluator(t, s, norm, |ev| ev.evaluate(id))
}

/// Evaluates the whole catalog. Triangle bounds are reported as not
/// applicable when `s` is `None`.
pub fn evaluate_all(
    t: &ComplexMatrix,
    s: Option<&ComplexMatrix>,
    norm: &NormSpec,
) -> Result<Vec<BoundReport>> {
    with_evaluator(t, s, norm, |ev| ev.evaluate_all())
}

fn with_evaluator<R>(
    t: &ComplexMatrix,
    s: Option<&ComplexMatrix>,
    norm: &NormSpec,
    f: impl FnOnce(&Evaluator<'_>) -> Result<R>,
) -> Result<R> {
    if let Some(s) = s {
        if s.n() != t.n() {
            return Err(Error::InvalidMatrix(format!(
                "triangle bounds need equal dimensions, got {} and {}",
                t.n(),
                s.n()
            )));
        }
    }
    let tp = OperatorProfile::new(t.clone())?;
    let t_normed = tp.normed(*norm);
    match s {
        None => f(&Evaluator::new(&t_normed)),
        Some(s) => {
            let sp = OperatorProfile::new(s.clone())?;
            let sum = OperatorProfile::new(t + s)?;
            let s_normed = sp.normed(*norm);
            let sum_normed = sum.normed(*norm);
            let ev = Evaluator::new(&t_normed).with_partner(Partner {
                other: &s_normed,
                sum: &sum_normed,
            });
            f(&ev)
        }
    }
}
