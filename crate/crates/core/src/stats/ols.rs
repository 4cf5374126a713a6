//! OLS of `y` on one regressor with absorbed dummy sets.
//!
//! Dummies are swept out of `y` and the regressor by alternating
//! projections (repeated within-group demeaning, one set after another).
//! By Frisch–Waugh–Lovell the slope and the residuals of the demeaned
//! regression equal those of the full model with explicit dummy columns,
//! so HC1 standard errors follow from the demeaned data alone.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub const SWEEP_TOLERANCE: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 10_000;

/// One categorical variable entered as a full set of dummies.
#[derive(Debug, Clone, Copy)]
pub struct DummySet<'a> {
    pub name: &'a str,
    /// Group label of every observation.
    pub groups: &'a [usize],
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlsResult {
    pub coefficient: f64,
    /// HC1 heteroskedasticity-robust standard error.
    pub robust_se: f64,
    pub t_stat: f64,
    pub r2: f64,
    pub adj_r2: f64,
    pub n_obs: usize,
    /// Regressor plus the rank of [intercept, dummies].
    pub n_params: usize,
    pub dummy_sets: Vec<String>,
    pub sweeps: usize,
}

struct Groups {
    labels: Vec<usize>,
    counts: Vec<f64>,
}

fn compact(set: &DummySet) -> Groups {
    let mut map = std::collections::BTreeMap::new();
    let labels: Vec<usize> = set
        .groups
        .iter()
        .map(|g| {
            let next = map.len();
            *map.entry(*g).or_insert(next)
        })
        .collect();
    let mut counts = vec![0.0; map.len()];
    for &l in &labels {
        counts[l] += 1.0;
    }
    Groups { labels, counts }
}

fn demean_within(v: &mut [f64], g: &Groups, sums: &mut Vec<f64>) -> f64 {
    sums.clear();
    sums.resize(g.counts.len(), 0.0);
    for (x, &l) in v.iter().zip(&g.labels) {
        sums[l] += x;
    }
    let mut max_change = 0.0_f64;
    for (s, c) in sums.iter_mut().zip(&g.counts) {
        *s /= c;
        max_change = max_change.max(s.abs());
    }
    for (x, &l) in v.iter_mut().zip(&g.labels) {
        *x -= sums[l];
    }
    max_change
}

/// Rank of the design block [1, D_1, …, D_S], from the eigenvalues of its
/// Gram matrix (co-occurrence counts).
fn dummy_rank(groups: &[Groups], n: usize) -> usize {
    if groups.is_empty() {
        return 1;
    }
    let mut offsets = vec![1];
    for g in groups {
        offsets.push(offsets.last().unwrap() + g.counts.len());
    }
    let p = *offsets.last().unwrap();
    let mut gram = DMatrix::<f64>::zeros(p, p);
    gram[(0, 0)] = n as f64;
    for i in 0..n {
        let cols: Vec<usize> = groups
            .iter()
            .zip(&offsets)
            .map(|(g, off)| off + g.labels[i])
            .collect();
        for &a in &cols {
            gram[(0, a)] += 1.0;
            gram[(a, 0)] += 1.0;
            for &b in &cols {
                gram[(a, b)] += 1.0;
            }
        }
    }
    let eig = SymmetricEigen::new(gram).eigenvalues;
    let top = eig.iter().fold(0.0_f64, |a, &v| a.max(v));
    eig.iter().filter(|&&v| v > top * 1e-9).count()
}

pub fn ols_fixed_effects(y: &[f64], measure: &[f64], dummies: &[DummySet]) -> Result<OlsResult> {
    let n = y.len();
    if measure.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: measure.len() });
    }
    for d in dummies {
        if d.groups.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: d.groups.len() });
        }
    }
    if y.iter().chain(measure).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite value in regression data".into()));
    }
    let groups: Vec<Groups> = dummies.iter().map(compact).collect();
    let n_params = 1 + dummy_rank(&groups, n);
    if n <= n_params {
        return Err(Error::InvalidInput(format!(
            "{n} observations cannot identify {n_params} parameters"
        )));
    }

    let y_mean = y.iter().sum::<f64>() / n as f64;
    let x_mean = measure.iter().sum::<f64>() / n as f64;
    let mut yt: Vec<f64> = y.iter().map(|v| v - y_mean).collect();
    let mut xt: Vec<f64> = measure.iter().map(|v| v - x_mean).collect();
    let sst: f64 = yt.iter().map(|v| v * v).sum();
    let x_var = xt.iter().map(|v| v * v).sum::<f64>() / n as f64;

    let scale = yt.iter().chain(&xt).fold(1.0_f64, |a, v| a.max(v.abs()));
    let mut sweeps = 0;
    let mut sums = Vec::new();
    if !groups.is_empty() {
        loop {
            sweeps += 1;
            let mut change = 0.0_f64;
            for g in &groups {
                change = change.max(demean_within(&mut yt, g, &mut sums));
                change = change.max(demean_within(&mut xt, g, &mut sums));
            }
            if change < SWEEP_TOLERANCE * scale || groups.len() == 1 {
                break;
            }
            if sweeps >= MAX_SWEEPS {
                return Err(Error::NonConvergence(format!(
                    "dummy absorption still moving by {change:e} after {MAX_SWEEPS} sweeps"
                )));
            }
        }
    }

    let sxx: f64 = xt.iter().map(|v| v * v).sum();
    if x_var == 0.0 || sxx / (n as f64) < 1e-12 * x_var {
        return Err(Error::Degenerate(
            "measure is collinear with the included dummies".into(),
        ));
    }
    let sxy: f64 = xt.iter().zip(&yt).map(|(a, b)| a * b).sum();
    let beta = sxy / sxx;
    let mut ssr = 0.0;
    let mut meat = 0.0;
    for (x, yv) in xt.iter().zip(&yt) {
        let e = yv - beta * x;
        ssr += e * e;
        meat += x * x * e * e;
    }
    let k = n_params as f64;
    let nf = n as f64;
    let robust_se = (nf / (nf - k) * meat).sqrt() / sxx;
    if sst == 0.0 {
        return Err(Error::Degenerate("dependent variable is constant".into()));
    }
    let r2 = 1.0 - ssr / sst;
    let adj_r2 = 1.0 - (1.0 - r2) * (nf - 1.0) / (nf - k);
    Ok(OlsResult {
        coefficient: beta,
        robust_se,
        t_stat: beta / robust_se,
        r2,
        adj_r2,
        n_obs: n,
        n_params,
        dummy_sets: dummies.iter().map(|d| d.name.to_string()).collect(),
        sweeps,
    })
}
