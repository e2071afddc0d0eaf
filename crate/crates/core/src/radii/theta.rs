//! Global search over the half-turn `[0, pi)`: a dense grid followed by
//! golden-section refinement around the most promising grid points.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSearch {
    pub grid_points: usize,
    pub refine_cells: usize,
    pub bracket_tol: f64,
}

impl Default for ThetaSearch {
    fn default() -> Self {
        Self {
            grid_points: 1024,
            refine_cells: 4,
            bracket_tol: 1e-10,
        }
    }
}

/// Location and value of the best angle found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaOptimum {
    pub value: f64,
    /// In `[0, pi)`; `value` is the objective evaluated exactly here.
    pub theta_star: f64,
    pub grid_points: usize,
    pub bracket_width: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ThetaOutcome {
    pub optimum: ThetaOptimum,
    pub est_error: f64,
}

/// Wraps an angle into `[0, pi)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// `true` if `(v, theta)` beats `(best_v, best_theta)`: larger value, then smaller angle.
fn better(v: f64, theta: f64, best_v: f64, best_theta: f64) -> bool {
    v > best_v || (v == best_v && theta < best_theta)
}

/// Number of grid points actually used by `search`.
pub fn grid_len(search: &ThetaSearch) -> usize {
    search.grid_points.max(3)
}

/// The `k`-th grid angle of a `g`-point grid on `[0, pi)`.
pub fn grid_angle(k: usize, g: usize) -> f64 {
    k as f64 * (PI / g as f64)
}

/// `f` sampled on the grid of `search`.
pub fn sample_grid<F>(mut f: F, search: &ThetaSearch) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let g = grid_len(search);
    (0..g).map(|k| f(grid_angle(k, g))).collect()
}

/// Maximizes a pi-periodic objective.
pub fn maximize<F>(mut f: F, search: &ThetaSearch) -> Result<ThetaOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    let grid = sample_grid(&mut f, search)?;
    maximize_from_grid(&grid, f, search)
}

/// [`maximize`] when `grid` already holds `f` at the grid angles of `search`.
pub fn maximize_from_grid<F>(grid: &[f64], mut f: F, search: &ThetaSearch) -> Result<ThetaOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    let g = grid_len(search);
    assert_eq!(grid.len(), g, "grid does not match the search");
    let h = PI / g as f64;

    let prev = |k: usize| (k + g - 1) % g;
    let next = |k: usize| (k + 1) % g;

    // Local maxima first, best first; pad with the remaining top points.
    let mut order: Vec<usize> = (0..g).collect();
    order.sort_by(|&a, &b| grid[b].total_cmp(&grid[a]).then(a.cmp(&b)));
    let is_peak = |k: usize| grid[k] >= grid[prev(k)] && grid[k] >= grid[next(k)];
    let mut chosen: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&k| is_peak(k))
        .take(search.refine_cells)
        .collect();
    for &k in &order {
        if chosen.len() >= search.refine_cells.min(g) {
            break;
        }
        if !chosen.contains(&k) {
            chosen.push(k);
        }
    }

    let mut best_v = grid[order[0]];
    let mut best_theta = order[0] as f64 * h;
    let mut width = 0.0f64;
    for &k in &chosen {
        let center = k as f64 * h;
        let (x, w) = golden_max(&mut f, center - h, center + h, search.bracket_tol)?;
        width = width.max(w);
        let theta = reduce_angle(x);
        let v = f(theta)?;
        if better(v, theta, best_v, best_theta) {
            best_v = v;
            best_theta = theta;
        }
    }

    // A cell `[a, b]` not covered by a refinement bracket can rise at most to
    // `(f(a) + f(b) + L h) / 2` for slope bound `L`; `L` is twice the largest
    // slope of the neighbouring cells.
    let slope = |k: usize| (grid[next(k)] - grid[k]).abs() / h;
    let mut est_error = 1e-10f64;
    for k in 0..g {
        let covered = chosen.iter().any(|&c| c == k || c == next(k));
        if !covered {
            let lipschitz = 2.0 * slope(prev(k)).max(slope(k)).max(slope(next(k)));
            let bound = 0.5 * (grid[k] + grid[next(k)] + lipschitz * h);
            est_error = est_error.max(bound - best_v);
        }
    }

    Ok(ThetaOutcome {
        optimum: ThetaOptimum {
            value: best_v,
            theta_star: best_theta,
            grid_points: g,
            bracket_width: width,
        },
        est_error,
    })
}

/// Minimizes a pi-periodic objective via [`maximize`] on its negation.
pub fn minimize<F>(mut f: F, search: &ThetaSearch) -> Result<ThetaOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut out = maximize(|t| f(t).map(|v| -v), search)?;
    out.optimum.value = -out.optimum.value;
    Ok(out)
}

/// [`minimize`] with a precomputed grid of `f`.
pub fn minimize_from_grid<F>(grid: &[f64], mut f: F, search: &ThetaSearch) -> Result<ThetaOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    let negated: Vec<f64> = grid.iter().map(|v| -v).collect();
    let mut out = maximize_from_grid(&negated, |t| f(t).map(|v| -v), search)?;
    out.optimum.value = -out.optimum.value;
    Ok(out)
}

/// Golden-section maximization on `[a, b]`; returns the best interior point
/// and the final bracket width.
fn golden_max<F>(f: &mut F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(reduce_angle(x1))?;
    let mut f2 = f(reduce_angle(x2))?;
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(reduce_angle(x1))?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(reduce_angle(x2))?;
        }
    }
    Ok(if f1 >= f2 { (x1, b - a) } else { (x2, b - a) })
}
