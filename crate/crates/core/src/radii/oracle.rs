//! Brute-force estimates of `w(T)` and `dw(T)` from random unit vectors.
//!
//! These never look at angles or norms of Hermitian parts; they only sample
//! `<Tx, x>` and `||Tx||`, which keeps them independent of the angle-search
//! path they are used to cross-check. Each new running maximum is polished
//! by a stochastic hill climb on its own random stream, so the estimate is a
//! non-decreasing function of the sample count for a fixed seed.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::sphere::random_unit_vector;
use crate::linalg::ComplexMatrix;

const POLISH_ITERS: usize = 4000;
const POLISH_PATIENCE: usize = 12;
const POLISH_MIN_RADIUS: f64 = 1e-13;

/// `|<Tx, x>|^2` and `||Tx||^2` for a unit vector `x`.
fn forms(t: &ComplexMatrix, x: &[Complex64], tx: &mut [Complex64]) -> (f64, f64) {
    t.apply_into(x, tx);
    let inner: Complex64 = tx.iter().zip(x).map(|(a, b)| a * b.conj()).sum();
    let norm2: f64 = tx.iter().map(|z| z.norm_sqr()).sum();
    (inner.norm_sqr(), norm2)
}

fn sampled_sup<F>(t: &ComplexMatrix, samples: usize, seed: u64, objective: F) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let n = t.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tx = vec![Complex64::new(0.0, 0.0); n];
    let mut eval = |x: &[Complex64]| {
        let (inner2, norm2) = forms(t, x, &mut tx);
        objective(inner2, norm2)
    };

    let mut record = f64::NEG_INFINITY;
    let mut best = f64::NEG_INFINITY;
    let mut records = 0u64;
    for _ in 0..samples.max(1) {
        let x = random_unit_vector(&mut rng, n);
        let v = eval(&x);
        if v > record {
            record = v;
            records += 1;
            best = best.max(v).max(polish(&x, v, seed, records, &mut eval));
        }
    }
    best
}

fn polish<F>(start: &[Complex64], start_value: f64, seed: u64, stream: u64, f: &mut F) -> f64
where
    F: FnMut(&[Complex64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
    rng.set_stream(stream);
    let mut x = start.to_vec();
    let mut fx = start_value;
    let mut radius = 0.1;
    let mut misses = 0;
    let mut trial = x.clone();
    for _ in 0..POLISH_ITERS {
        for (t, z) in trial.iter_mut().zip(&x) {
            let d = Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
            *t = z + d * radius;
        }
        let norm = trial.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        trial.iter_mut().for_each(|z| *z /= norm);
        let ft = f(&trial);
        if ft > fx {
            fx = ft;
            x.copy_from_slice(&trial);
            misses = 0;
            radius *= 1.5;
        } else {
            misses += 1;
            if misses >= POLISH_PATIENCE {
                radius *= 0.5;
                misses = 0;
                if radius < POLISH_MIN_RADIUS {
                    break;
                }
            }
        }
    }
    fx
}

/// Lower estimate of `w(T) = sup |<Tx, x>|` over `samples` random unit vectors.
pub fn brute_force_w(t: &ComplexMatrix, samples: usize, seed: u64) -> f64 {
    sampled_sup(t, samples, seed, |inner2, _| inner2).sqrt()
}

/// Lower estimate of `dw(T) = sup sqrt(|<Tx, x>|^2 + ||Tx||^4)`.
pub fn brute_force_dw(t: &ComplexMatrix, samples: usize, seed: u64) -> f64 {
    sampled_sup(t, samples, seed, |inner2, norm2| inner2 + norm2 * norm2).sqrt()
}
