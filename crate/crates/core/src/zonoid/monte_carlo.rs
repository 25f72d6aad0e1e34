use itertools::Itertools;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Field;

/// A hit-or-miss volume estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeEstimate {
    pub mean: f64,
    /// Three standard errors.
    pub half_width: f64,
    pub sigma: f64,
    pub samples: u64,
    pub seed: u64,
}

const CHUNK: u64 = 1 << 16;

/// Each chunk draws from its own ChaCha stream, so the estimate depends
/// only on `(seed, samples)` and not on how rayon splits the work.
fn hit_or_miss<F, P>(lo: &[F], hi: &[F], samples: u64, seed: u64, inside: P) -> Result<VolumeEstimate>
where
    F: Float + Send + Sync,
    P: Fn(&[F]) -> bool + Sync,
{
    if samples == 0 {
        return Err(Error::invalid("Monte Carlo needs at least one sample"));
    }
    let dim = lo.len();
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut x = vec![F::zero(); dim];
            let mut count = 0u64;
            for _ in 0..n {
                for i in 0..dim {
                    let u = F::from(rng.gen::<f64>()).unwrap();
                    x[i] = lo[i] + (hi[i] - lo[i]) * u;
                }
                if inside(&x) {
                    count += 1;
                }
            }
            count
        })
        .sum();
    let box_volume: f64 = lo
        .iter()
        .zip(hi)
        .map(|(a, b)| (*b - *a).to_f64().unwrap())
        .product();
    let p = hits as f64 / samples as f64;
    let sigma = box_volume * (p * (1.0 - p) / samples as f64).sqrt();
    Ok(VolumeEstimate {
        mean: box_volume * p,
        half_width: 3.0 * sigma,
        sigma,
        samples,
        seed,
    })
}

/// Facet normals of the zonotope spanned by the columns of `v`: generalized
/// cross products of every `N−1` linearly independent generators.
fn facet_normals<F: Float + Field>(v: &Matrix<F>) -> Vec<Vec<F>> {
    let (n, m) = (v.rows(), v.cols());
    if n == 1 {
        return vec![vec![F::one()]];
    }
    let mut out = Vec::new();
    for cols in (0..m).combinations(n - 1) {
        let sub = v.select_cols(&cols);
        let normal: Vec<F> = (0..n)
            .map(|i| {
                let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                let d = sub.select_rows(&rows).det_gauss().unwrap_or(F::zero());
                if i % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .collect();
        let scale = normal.iter().fold(F::zero(), |a, x| a.max(x.abs()));
        if scale > F::epsilon() {
            out.push(normal.into_iter().map(|x| x / scale).collect());
        }
    }
    out
}

/// Estimates the volume of `Σ_m [−v_m, v_m]` (columns of `segments`).
pub fn monte_carlo_zonotope<F>(segments: &Matrix<F>, samples: u64, seed: u64) -> Result<VolumeEstimate>
where
    F: Float + Field + Send + Sync,
{
    let (n, m) = (segments.rows(), segments.cols());
    if n == 0 || n > 6 {
        return Err(Error::DimensionTooLarge { dim: n, limit: 6 });
    }
    let hi: Vec<F> = (0..n)
        .map(|i| (0..m).fold(F::zero(), |a, j| a + segments.get(i, j).abs()))
        .collect();
    let lo: Vec<F> = hi.iter().map(|x| -*x).collect();
    let normals = facet_normals(segments);
    if normals.is_empty() || hi.iter().any(|x| *x <= F::zero()) {
        return Ok(VolumeEstimate { mean: 0.0, half_width: 0.0, sigma: 0.0, samples, seed });
    }
    let support: Vec<F> = normals
        .iter()
        .map(|nv| {
            (0..m).fold(F::zero(), |a, j| {
                a + (0..n).fold(F::zero(), |s, i| s + nv[i] * *segments.get(i, j)).abs()
            })
        })
        .collect();
    hit_or_miss(&lo, &hi, samples, seed, |x| {
        normals.iter().zip(&support).all(|(nv, h)| {
            let dot = nv.iter().zip(x).fold(F::zero(), |a, (p, q)| a + *p * *q);
            dot.abs() <= *h
        })
    })
}

/// Estimates the volume of `{ξ : Σ_m w_m·|⟨ξ, u_m⟩| ≤ 1}` for the rows `u_m`.
pub fn monte_carlo_primal_ball<F>(u: &Matrix<F>, weights: &[F], samples: u64, seed: u64) -> Result<VolumeEstimate>
where
    F: Float + Field + Send + Sync,
{
    let (m, n) = (u.rows(), u.cols());
    if n == 0 || n > 6 {
        return Err(Error::DimensionTooLarge { dim: n, limit: 6 });
    }
    if weights.len() != m {
        return Err(Error::invalid("one weight per row is required"));
    }
    let w = Matrix::from_fn(m, n, |i, j| *u.get(i, j) * weights[i]);
    // |ξ_i| ≤ max_j |(W_I^{-1})_{ij}| for any invertible N-row block W_I
    let mut bound = vec![F::infinity(); n];
    for rows in (0..m).combinations(n) {
        let block = w.select_rows(&rows);
        let mut inv_cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<F> = (0..n).map(|k| if k == j { F::one() } else { F::zero() }).collect();
            match block.solve(&e) {
                Some(c) if c.iter().all(|x| x.is_finite()) => inv_cols.push(c),
                _ => break,
            }
        }
        if inv_cols.len() < n {
            continue;
        }
        for (i, b) in bound.iter_mut().enumerate() {
            let r = inv_cols.iter().fold(F::zero(), |a, c| a.max(c[i].abs()));
            *b = b.min(r);
        }
    }
    if bound.iter().any(|b| !b.is_finite()) {
        return Err(Error::RankDeficient { expected: n, found: n - 1 });
    }
    let slack = F::from(1.0 + 1e-6).unwrap();
    let hi: Vec<F> = bound.iter().map(|b| *b * slack).collect();
    let lo: Vec<F> = hi.iter().map(|x| -*x).collect();
    hit_or_miss(&lo, &hi, samples, seed, |x| {
        let mut s = F::zero();
        for r in 0..m {
            let dot = (0..n).fold(F::zero(), |a, j| a + *w.get(r, j) * x[j]);
            s = s + dot.abs();
        }
        s <= F::one()
    })
}
