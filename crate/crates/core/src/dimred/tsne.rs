//! Exact t-SNE.
//!
//! Conditional affinities use a Gaussian kernel whose precision is found by
//! bisection so that each row's perplexity matches the target; the joint
//! matrix is p_ij = (p_{j|i} + p_{i|j}) / 2n.  Low-dimensional affinities
//! use the Student-t kernel 1/(1 + |y_i − y_j|²).  Optimization is gradient
//! descent with momentum, per-coordinate gains and early exaggeration.
//! All reductions run in index order, so results depend only on the seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TsneConfig {
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub early_exaggeration: f64,
    pub exaggeration_iters: usize,
    pub initial_momentum: f64,
    pub final_momentum: f64,
    pub momentum_switch: usize,
    pub seed: u64,
}

impl Default for TsneConfig {
    fn default() -> Self {
        TsneConfig {
            perplexity: 30.0,
            iterations: 1000,
            learning_rate: 200.0,
            early_exaggeration: 12.0,
            exaggeration_iters: 250,
            initial_momentum: 0.5,
            final_momentum: 0.8,
            momentum_switch: 250,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TsneResult {
    pub coords: Vec<[f64; 2]>,
    /// KL(P‖Q) at the random initialization.
    pub initial_kl: f64,
    pub final_kl: f64,
    /// Largest |2^H_i − perplexity| / perplexity over rows.
    pub max_perplexity_error: f64,
    /// Joint affinities, row-major n × n.
    pub p: Vec<f64>,
    pub jittered: bool,
}

/// Labeled 2-D coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding2D {
    pub labels: Vec<String>,
    pub coords: Vec<[f64; 2]>,
    pub final_kl: f64,
}

const MAX_BISECTION_STEPS: usize = 200;
const PERPLEXITY_TOLERANCE: f64 = 1e-5;

fn squared_distances(x: &[Vec<f64>]) -> Vec<f64> {
    let n = x.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let s: f64 = x[i].iter().zip(&x[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            d[i * n + j] = s;
            d[j * n + i] = s;
        }
    }
    d
}

/// Fills `row` with p_{j|i} for precision `beta` and returns the entropy
/// in nats.  Distances are shifted by their minimum for stability.
fn conditional_row(dist: &[f64], i: usize, beta: f64, row: &mut [f64]) -> f64 {
    let dmin = dist
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .fold(f64::INFINITY, |m, (_, &v)| m.min(v));
    let mut sum = 0.0;
    let mut weighted = 0.0;
    for (j, (&dj, r)) in dist.iter().zip(row.iter_mut()).enumerate() {
        if j == i {
            *r = 0.0;
            continue;
        }
        let e = (-(dj - dmin) * beta).exp();
        *r = e;
        sum += e;
        weighted += e * (dj - dmin);
    }
    for r in row.iter_mut() {
        *r /= sum;
    }
    sum.ln() + beta * weighted / sum
}

/// Bisection on the precision of each row; returns the conditional matrix
/// and the worst relative perplexity error.
fn calibrate(dist: &[f64], n: usize, perplexity: f64) -> Option<(Vec<f64>, f64)> {
    let target = perplexity.ln();
    let mut p = vec![0.0; n * n];
    let mut worst = 0.0_f64;
    for i in 0..n {
        let drow = &dist[i * n..(i + 1) * n];
        let mean_d = drow.iter().sum::<f64>() / (n - 1) as f64;
        if !(mean_d > 0.0) {
            return None;
        }
        let mut beta = 1.0 / mean_d;
        let (mut lo, mut hi) = (0.0, f64::INFINITY);
        let row = &mut p[i * n..(i + 1) * n];
        let mut err = f64::INFINITY;
        for _ in 0..MAX_BISECTION_STEPS {
            let h = conditional_row(drow, i, beta, row);
            err = (h.exp() - perplexity).abs() / perplexity;
            if err < PERPLEXITY_TOLERANCE {
                break;
            }
            if h > target {
                lo = beta;
                beta = if hi.is_finite() { (beta + hi) / 2.0 } else { beta * 2.0 };
            } else {
                hi = beta;
                beta = (beta + lo) / 2.0;
            }
        }
        if !(err < PERPLEXITY_TOLERANCE) || row.iter().any(|v| !v.is_finite()) {
            return None;
        }
        worst = worst.max(err);
    }
    Some((p, worst))
}

fn symmetrize(cond: &[f64], n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n * n];
    let denom = 2.0 * n as f64;
    for i in 0..n {
        for j in 0..n {
            p[i * n + j] = (cond[i * n + j] + cond[j * n + i]) / denom;
        }
    }
    p
}

/// Student-t kernel values (diagonal zero) and their sum.
fn low_dim_kernel(y: &[[f64; 2]], num: &mut [f64]) -> f64 {
    let n = y.len();
    let mut z = 0.0;
    for i in 0..n {
        num[i * n + i] = 0.0;
        for j in i + 1..n {
            let dx = y[i][0] - y[j][0];
            let dy = y[i][1] - y[j][1];
            let q = 1.0 / (1.0 + dx * dx + dy * dy);
            num[i * n + j] = q;
            num[j * n + i] = q;
            z += 2.0 * q;
        }
    }
    z
}

/// Σ p log(p/q); zero-probability terms of P contribute nothing.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), actual: q.len() });
    }
    let mut kl = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi < 0.0 || qi < 0.0 || !pi.is_finite() || !qi.is_finite() {
            return Err(Error::InvalidInput(format!("invalid probability at index {i}")));
        }
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::InvalidInput(format!("q is zero where p is positive (index {i})")));
        }
        kl += pi * (pi / qi).ln();
    }
    Ok(kl.max(0.0))
}

fn kl_at(p: &[f64], y: &[[f64; 2]], num: &mut [f64]) -> Result<f64> {
    let z = low_dim_kernel(y, num);
    let q: Vec<f64> = num.iter().map(|v| v / z).collect();
    kl_divergence(p, &q)
}

pub fn tsne(data: &[Vec<f64>], config: &TsneConfig) -> Result<TsneResult> {
    let n = data.len();
    if n < 4 {
        return Err(Error::InvalidInput(format!("t-SNE needs at least 4 points, got {n}")));
    }
    let d = data[0].len();
    if let Some(r) = data.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, actual: r.len() });
    }
    if data.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite input to t-SNE".into()));
    }
    if !(config.perplexity > 1.0 && config.perplexity < (n as f64 - 1.0) / 3.0) {
        return Err(Error::InvalidInput(format!(
            "perplexity {} must lie in (1, {:.3}) for {n} points",
            config.perplexity,
            (n as f64 - 1.0) / 3.0
        )));
    }
    if config.iterations == 0 || !(config.learning_rate > 0.0) {
        return Err(Error::InvalidInput("iterations and learning rate must be positive".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut jittered = false;
    let (cond, max_perplexity_error) = match calibrate(&squared_distances(data), n, config.perplexity) {
        Some(c) => c,
        None => {
            jittered = true;
            let noise = Normal::new(0.0, 1e-10).expect("valid sd");
            let shaken: Vec<Vec<f64>> = data
                .iter()
                .map(|r| r.iter().map(|v| v + noise.sample(&mut rng)).collect())
                .collect();
            calibrate(&squared_distances(&shaken), n, config.perplexity).ok_or_else(|| {
                Error::NonConvergence("perplexity calibration failed even after jittering duplicates".into())
            })?
        }
    };
    let p = symmetrize(&cond, n);

    let init = Normal::new(0.0, 1e-4).expect("valid sd");
    let mut y: Vec<[f64; 2]> = (0..n).map(|_| [init.sample(&mut rng), init.sample(&mut rng)]).collect();
    let mut num = vec![0.0; n * n];
    let initial_kl = kl_at(&p, &y, &mut num)?;

    let mut update = vec![[0.0; 2]; n];
    let mut gains = vec![[1.0_f64; 2]; n];
    let mut grad = vec![[0.0; 2]; n];
    for iter in 0..config.iterations {
        let exaggeration = if iter < config.exaggeration_iters { config.early_exaggeration } else { 1.0 };
        let momentum = if iter < config.momentum_switch { config.initial_momentum } else { config.final_momentum };
        let z = low_dim_kernel(&y, &mut num);
        for g in grad.iter_mut() {
            *g = [0.0; 2];
        }
        for i in 0..n {
            let (mut gx, mut gy) = (0.0, 0.0);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let w = num[i * n + j];
                let m = (exaggeration * p[i * n + j] - w / z) * w;
                gx += m * (y[i][0] - y[j][0]);
                gy += m * (y[i][1] - y[j][1]);
            }
            grad[i] = [4.0 * gx, 4.0 * gy];
        }
        for i in 0..n {
            for c in 0..2 {
                let same_sign = (grad[i][c] > 0.0) == (update[i][c] > 0.0);
                gains[i][c] = if same_sign { (gains[i][c] * 0.8).max(0.01) } else { gains[i][c] + 0.2 };
                update[i][c] = momentum * update[i][c] - config.learning_rate * gains[i][c] * grad[i][c];
                y[i][c] += update[i][c];
            }
        }
        let (mx, my) = y.iter().fold((0.0, 0.0), |(a, b), v| (a + v[0], b + v[1]));
        let (mx, my) = (mx / n as f64, my / n as f64);
        for v in y.iter_mut() {
            v[0] -= mx;
            v[1] -= my;
        }
    }
    if y.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence("t-SNE coordinates diverged".into()));
    }
    let final_kl = kl_at(&p, &y, &mut num)?;
    Ok(TsneResult { coords: y, initial_kl, final_kl, max_perplexity_error, p, jittered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn blobs(n_each: usize, separation: f64, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, 1.0).unwrap();
        (0..2 * n_each)
            .map(|i| {
                let shift = if i < n_each { 0.0 } else { separation };
                (0..5).map(|k| normal.sample(&mut rng) + if k == 0 { shift } else { 0.0 }).collect()
            })
            .collect()
    }

    fn quick(perplexity: f64, seed: u64) -> TsneConfig {
        TsneConfig { perplexity, iterations: 400, seed, ..TsneConfig::default() }
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_divergence(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        let v = kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn kl_is_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a: Vec<f64> = (0..6).map(|_| rng.random_range(0.0..1.0)).collect();
            let b: Vec<f64> = (0..6).map(|_| rng.random_range(0.01..1.0)).collect();
            let (sa, sb) = (a.iter().sum::<f64>(), b.iter().sum::<f64>());
            let p: Vec<f64> = a.iter().map(|v| v / sa).collect();
            let q: Vec<f64> = b.iter().map(|v| v / sb).collect();
            assert!(kl_divergence(&p, &q).unwrap() >= 0.0);
        }
    }

    #[test]
    fn affinities_are_calibrated_and_normalized() {
        let data = blobs(20, 4.0, 1);
        let n = data.len();
        let r = tsne(&data, &quick(8.0, 0)).unwrap();
        assert!(r.max_perplexity_error < 1e-4);
        let sum: f64 = r.p.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        for i in 0..n {
            for j in 0..n {
                assert_eq!(r.p[i * n + j], r.p[j * n + i]);
                assert!(r.p[i * n + j] >= 0.0);
            }
        }
    }

    #[test]
    fn optimization_reduces_kl_and_centers() {
        let r = tsne(&blobs(20, 6.0, 2), &quick(8.0, 5)).unwrap();
        assert!(r.final_kl < r.initial_kl, "{} vs {}", r.final_kl, r.initial_kl);
        let (mx, my) = r.coords.iter().fold((0.0_f64, 0.0_f64), |(a, b), v| (a + v[0], b + v[1]));
        assert!(mx.abs() / 40.0 < 1e-6 && my.abs() / 40.0 < 1e-6);
    }

    #[test]
    fn same_seed_is_bitwise_identical() {
        let data = blobs(10, 5.0, 3);
        let a = tsne(&data, &quick(5.0, 9)).unwrap();
        let b = tsne(&data, &quick(5.0, 9)).unwrap();
        assert_eq!(a.coords, b.coords);
        let c = tsne(&data, &quick(5.0, 10)).unwrap();
        assert_ne!(a.coords, c.coords);
    }

    #[test]
    fn identical_points_are_jittered_once() {
        let data = vec![vec![1.0, 2.0]; 10];
        let r = tsne(&data, &quick(2.0, 0)).unwrap();
        assert!(r.jittered);
        assert!(r.coords.iter().flatten().all(|v| v.is_finite()));
        assert!(!tsne(&blobs(10, 5.0, 3), &quick(2.0, 0)).unwrap().jittered);
    }

    #[test]
    fn perplexity_bound_is_enforced() {
        let data = blobs(5, 1.0, 4);
        assert!(tsne(&data, &quick(3.0, 0)).is_err());
        assert!(tsne(&data, &quick(1.0, 0)).is_err());
    }
}
