use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{mean, sample_sd};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTestResult {
    pub rho0: f64,
    pub mean: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub df: usize,
}

/// Two-sided one-sample t-test of H0: mean = `mu0`.
pub fn t_test_mean(values: &[f64], mu0: f64) -> Result<TTestResult> {
    if values.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "t-test needs at least 3 values, got {}",
            values.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) || !mu0.is_finite() {
        return Err(Error::InvalidInput("non-finite value in t-test".into()));
    }
    let n = values.len();
    let m = mean(values);
    let sd = sample_sd(values);
    if !(sd > 0.0) {
        return Err(Error::Degenerate("t-test on a sample with zero standard deviation".into()));
    }
    let t = (m - mu0) / (sd / (n as f64).sqrt());
    let df = n - 1;
    Ok(TTestResult {
        rho0: mu0,
        mean: m,
        t_stat: t,
        p_value: two_sided_p(t, df as f64),
        df,
    })
}

fn two_sided_p(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("df is positive");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoSweep {
    /// Smallest grid value whose null hypothesis is not rejected.
    pub first_non_rejected: Option<f64>,
    pub alpha: f64,
    pub results: Vec<TTestResult>,
}

/// The grid 0.01, 0.02, …, 0.99.
pub fn rho_sweep_grid() -> Vec<f64> {
    (1..=99).map(|i| f64::from(i) / 100.0).collect()
}

/// Tests H0: mean = ρ0 for each ρ0 in `grid` (ascending) and reports the
/// first one with p > `alpha`.
pub fn rho_sweep(values: &[f64], grid: &[f64], alpha: f64) -> Result<RhoSweep> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let results = grid
        .iter()
        .map(|&rho0| t_test_mean(values, rho0))
        .collect::<Result<Vec<_>>>()?;
    let first_non_rejected = results.iter().find(|r| r.p_value > alpha).map(|r| r.rho0);
    Ok(RhoSweep { first_non_rejected, alpha, results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn textbook_t_statistic() {
        // mean .5, sample sd .1, se .1/√3.
        let r = t_test_mean(&[0.4, 0.5, 0.6], 0.0).unwrap();
        assert!((r.t_stat - 5.0 * 3.0_f64.sqrt()).abs() < 1e-12);
        assert!((r.t_stat - 8.6603).abs() < 1e-4);
        assert_eq!(r.df, 2);
    }

    #[test]
    fn null_at_sample_mean_has_p_one() {
        let v = [0.1, 0.25, 0.4, 0.7];
        let r = t_test_mean(&v, mean(&v)).unwrap();
        assert!(r.t_stat.abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn t_two_df_sixty_is_five_percent() {
        // Tabulated two-sided critical value for df = 60 at 5% is 2.000.
        let p = two_sided_p(2.0, 60.0);
        assert!((p - 0.05).abs() < 5e-4, "{p}");
    }

    #[test]
    fn p_value_matches_closed_form_for_two_df() {
        // For df = 2, P(|T| > t) = 1 − t/√(t² + 2).
        for t in [0.1, 0.8, 2.5, 9.0] {
            let closed = 1.0 - t / (t * t + 2.0_f64).sqrt();
            assert!((two_sided_p(t, 2.0) - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_sd_is_rejected() {
        assert!(t_test_mean(&[0.5, 0.5, 0.5], 0.0).is_err());
        assert!(t_test_mean(&[0.5, 0.6], 0.0).is_err());
    }

    #[test]
    fn p_rises_toward_the_sample_mean() {
        let v = [0.31, 0.52, 0.47, 0.66, 0.5, 0.38];
        let m = mean(&v);
        let below: Vec<f64> = (0..20).map(|i| m - 0.4 + 0.02 * f64::from(i)).collect();
        let ps: Vec<f64> = below.iter().map(|&r| t_test_mean(&v, r).unwrap().p_value).collect();
        assert!(ps.windows(2).all(|w| w[1] > w[0]));
        let above: Vec<f64> = (0..20).map(|i| m + 0.4 - 0.02 * f64::from(i)).collect();
        let ps: Vec<f64> = above.iter().map(|&r| t_test_mean(&v, r).unwrap().p_value).collect();
        assert!(ps.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn sweep_finds_cluster_center() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let normal = Normal::new(0.5, 0.05).unwrap();
        let v: Vec<f64> = (0..244).map(|_| normal.sample(&mut rng)).collect();
        let s = rho_sweep(&v, &rho_sweep_grid(), 0.05).unwrap();
        let first = s.first_non_rejected.unwrap();
        assert!((0.49..=0.51).contains(&first), "{first}");
        assert_eq!(s.results.len(), 99);
    }

    #[test]
    fn sweep_boundary() {
        let v = [0.989, 0.99, 0.991, 0.9905, 0.9895];
        let s = rho_sweep(&v, &rho_sweep_grid(), 0.05).unwrap();
        assert_eq!(s.first_non_rejected, Some(0.99));
        let s = rho_sweep(&[2.0, 2.1, 1.9], &rho_sweep_grid(), 0.05).unwrap();
        assert_eq!(s.first_non_rejected, None);
    }
}
