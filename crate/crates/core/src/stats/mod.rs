//! Correlations, one-sample t-tests, fixed-effects OLS and smoothing.

mod correlation;
mod ols;
mod smooth;
mod ttest;

pub use correlation::{kendall_tau, midranks, pearson, percentile_rank, spearman};
pub use ols::{ols_fixed_effects, DummySet, OlsResult};
pub use smooth::{local_poly_fit_at, local_poly_smooth, SmoothCurve, DEFAULT_BANDWIDTH};
pub use ttest::{rho_sweep, rho_sweep_grid, t_test_mean, RhoSweep, TTestResult};

use crate::error::{Error, Result};

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (divisor n − 1).
pub fn sample_sd(values: &[f64]) -> f64 {
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() as f64 - 1.0)).sqrt()
}

/// Standardizes to mean 0 and sample sd 1.
pub fn standardize(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "standardization needs at least 2 values, got {}",
            values.len()
        )));
    }
    let m = mean(values);
    let centered: Vec<f64> = values.iter().map(|v| v - m).collect();
    let sd = (centered.iter().map(|c| c * c).sum::<f64>() / (values.len() as f64 - 1.0)).sqrt();
    let scale = centered.iter().fold(0.0_f64, |a, c| a.max(c.abs()));
    if !(sd > 1e-12 * scale.max(f64::MIN_POSITIVE)) || sd == 0.0 {
        return Err(Error::Degenerate("zero variance".into()));
    }
    Ok(centered.into_iter().map(|c| c / sd).collect())
}
