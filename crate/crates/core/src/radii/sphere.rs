//! Multi-start coordinate ascent over the unit sphere of `C^n`, seen as the
//! unit sphere of `R^{2n}`.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x5EED_D0D0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSearch {
    pub restarts: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Guard against endless creeping at a single step size.
    pub max_sweeps_per_step: usize,
    pub seed: u64,
}

impl Default for SphereSearch {
    fn default() -> Self {
        Self {
            restarts: 64,
            initial_step: 0.1,
            min_step: 1e-10,
            max_sweeps_per_step: 1000,
            seed: DEFAULT_SEED,
        }
    }
}

impl SphereSearch {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct SphereOutcome {
    pub value: f64,
    pub vector: Vec<Complex64>,
}

/// Draws a uniformly distributed unit vector in `C^n`.
pub fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn to_complex(x: &[f64], out: &mut [Complex64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    for (k, z) in out.iter_mut().enumerate() {
        *z = Complex64::new(x[2 * k] / norm, x[2 * k + 1] / norm);
    }
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in x {
        *v /= norm;
    }
}

fn lexicographic(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Maximizes `f` over unit vectors of `C^n`.
///
/// Fails with [`Error::OptimizerStall`] when no restart moves off its
/// starting point even though the starting values differ, which only happens
/// when the objective is broken (e.g. not finite).
pub fn maximize<F>(n: usize, mut f: F, search: &SphereSearch) -> Result<SphereOutcome>
where
    F: FnMut(&[Complex64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    let mut best: Option<SphereOutcome> = None;
    let mut any_improved = false;
    let (mut start_min, mut start_max) = (f64::INFINITY, f64::NEG_INFINITY);

    for _ in 0..search.restarts.max(1) {
        let start = random_unit_vector(&mut rng, n);
        let mut x: Vec<f64> = start.iter().flat_map(|z| [z.re, z.im]).collect();
        let mut fx = f(&start);
        start_min = start_min.min(fx);
        start_max = start_max.max(fx);
        let start_value = fx;

        let mut step = search.initial_step;
        while step >= search.min_step {
            for _ in 0..search.max_sweeps_per_step {
                let mut moved = false;
                for j in 0..2 * n {
                    for dir in [1.0, -1.0] {
                        let old = x[j];
                        x[j] = old + dir * step;
                        to_complex(&x, &mut scratch);
                        let ft = f(&scratch);
                        if ft > fx {
                            fx = ft;
                            normalize(&mut x);
                            moved = true;
                            break;
                        }
                        x[j] = old;
                    }
                }
                if !moved {
                    break;
                }
            }
            step *= 0.5;
        }
        if fx > start_value {
            any_improved = true;
        }

        to_complex(&x, &mut scratch);
        let value = f(&scratch);
        let candidate = SphereOutcome {
            value,
            vector: scratch.clone(),
        };
        best = match best {
            None => Some(candidate),
            Some(b) => {
                let wins = candidate.value > b.value
                    || (candidate.value == b.value
                        && lexicographic(&candidate.vector, &b.vector) == Ordering::Less);
                Some(if wins { candidate } else { b })
            }
        };
    }

    let best = best.expect("at least one restart");
    let spread = start_max - start_min;
    if !best.value.is_finite()
        || (!any_improved && (spread.is_nan() || spread > 1e-12 * start_max.abs().max(1.0)))
    {
        return Err(Error::OptimizerStall);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximizes_rayleigh_quotient() {
        // max of sum d_k |x_k|^2 is the largest d.
        let d = [0.5, 3.0, -1.0];
        let f = |x: &[Complex64]| x.iter().zip(d).map(|(z, dk)| dk * z.norm_sqr()).sum::<f64>();
        let out = maximize(3, f, &SphereSearch::default()).unwrap();
        assert!((out.value - 3.0).abs() < 1e-9);
        assert!((out.vector[1].norm() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn constant_objective_is_not_a_stall() {
        let out = maximize(2, |_| 2.0, &SphereSearch::default()).unwrap();
        assert_eq!(out.value, 2.0);
    }

    #[test]
    fn nan_objective_stalls() {
        assert!(matches!(
            maximize(2, |_| f64::NAN, &SphereSearch::default()),
            Err(Error::OptimizerStall)
        ));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let f = |x: &[Complex64]| (x[0] * x[1].conj()).re;
        let a = maximize(2, f, &SphereSearch::with_seed(4)).unwrap();
        let b = maximize(2, f, &SphereSearch::with_seed(4)).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.vector, b.vector);
    }
}
