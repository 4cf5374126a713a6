use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// k orthonormal directions of length d, by decreasing variance.
    pub components: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
    /// Sum of all column variances of the input.
    pub total_variance: f64,
}

impl PcaModel {
    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| c.iter().zip(row).zip(&self.mean).map(|((ci, x), m)| ci * (x - m)).sum())
            .collect()
    }

    pub fn inverse_transform(&self, scores: &[f64]) -> Vec<f64> {
        let mut out = self.mean.clone();
        for (c, s) in self.components.iter().zip(scores) {
            for (o, ci) in out.iter_mut().zip(c) {
                *o += s * ci;
            }
        }
        out
    }
}

/// Top eigenpairs of a symmetric matrix, largest first.
fn top_eigen(m: DMatrix<f64>, k: usize) -> Vec<(f64, Vec<f64>)> {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    order
        .into_iter()
        .take(k)
        .map(|j| (eig.eigenvalues[j].max(0.0), eig.eigenvectors.column(j).iter().copied().collect()))
        .collect()
}

/// Flips a direction so its largest-magnitude entry is positive.
fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Principal components of the rows of `data` (n × d).  Uses the d × d
/// covariance when d ≤ n and the n × n Gram matrix otherwise.
pub fn pca_fit_transform(data: &[Vec<f64>], k: usize) -> Result<(PcaModel, Vec<Vec<f64>>)> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!("PCA needs at least 2 rows, got {n}")));
    }
    let d = data[0].len();
    if let Some(r) = data.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, actual: r.len() });
    }
    if k == 0 || k > (n - 1).min(d) {
        return Err(Error::InvalidInput(format!(
            "k = {k} outside 1..={} for {n} rows of dim {d}",
            (n - 1).min(d)
        )));
    }
    let mut mean = vec![0.0; d];
    for r in data {
        for (m, x) in mean.iter_mut().zip(r) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let xc = DMatrix::from_fn(n, d, |i, j| data[i][j] - mean[j]);
    let denom = n as f64 - 1.0;
    let total_variance = xc.iter().map(|v| v * v).sum::<f64>() / denom;

    let gram_route = d > n;
    let mut pairs = if gram_route {
        top_eigen(&xc * xc.transpose() / denom, k)
    } else {
        top_eigen(xc.transpose() * &xc / denom, k)
    };
    let top = pairs.first().map_or(0.0, |p| p.0);
    if gram_route && pairs.iter().any(|p| p.0 <= 1e-12 * top.max(f64::MIN_POSITIVE)) {
        // Directions with no variance cannot be recovered from the Gram
        // matrix; the covariance route handles them.
        pairs = top_eigen(xc.transpose() * &xc / denom, k);
    } else if gram_route {
        for (lambda, u) in &mut pairs {
            // v = Xcᵀ u / √((n − 1) λ)
            let uv = nalgebra::DVector::from_column_slice(u);
            let v = xc.transpose() * uv / (denom * *lambda).sqrt();
            *u = v.iter().copied().collect();
        }
    }
    let mut components = Vec::with_capacity(k);
    let mut explained_variance = Vec::with_capacity(k);
    for (lambda, mut v) in pairs {
        fix_sign(&mut v);
        components.push(v);
        explained_variance.push(lambda);
    }
    let model = PcaModel { mean, components, explained_variance, total_variance };
    let scores = data.iter().map(|r| model.transform(r)).collect();
    Ok((model, scores))
}
