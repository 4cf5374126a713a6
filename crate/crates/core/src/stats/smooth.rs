//! Locally weighted polynomial regression with a tricube kernel and a
//! nearest-neighbour bandwidth.
//!
//! At a target point x0 the window is the ⌈bandwidth·n⌉ observations
//! closest to x0, h is the distance to the farthest of them, and each
//! observation gets weight (1 − (|x − x0|/h)³)³ (zero at or beyond h).  If
//! the weighted design is singular the window is widened once to twice as
//! many neighbours with h stretched by 10%.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub const DEFAULT_BANDWIDTH: f64 = 0.6;

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothCurve {
    pub grid_x: Vec<f64>,
    pub fitted_y: Vec<f64>,
    pub bandwidth: f64,
    pub degree: usize,
}

fn tricube(u: f64) -> f64 {
    if u >= 1.0 {
        0.0
    } else {
        let t = 1.0 - u * u * u;
        t * t * t
    }
}

fn solve_local(x: &[f64], y: &[f64], x0: f64, h: f64, degree: usize) -> Option<f64> {
    let rows: Vec<(f64, f64, f64)> = x
        .iter()
        .zip(y)
        .filter_map(|(&xi, &yi)| {
            let w = tricube((xi - x0).abs() / h);
            (w > 0.0).then(|| ((xi - x0) / h, yi, w.sqrt()))
        })
        .collect();
    if rows.len() < degree + 1 {
        return None;
    }
    let p = degree + 1;
    let a = DMatrix::from_fn(rows.len(), p, |i, j| rows[i].2 * rows[i].0.powi(j as i32));
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.2 * r.1));
    let qr = a.qr();
    let r = qr.r();
    let biggest = (0..p).fold(0.0_f64, |m, j| m.max(r[(j, j)].abs()));
    if (0..p).any(|j| r[(j, j)].abs() <= 1e-10 * biggest) || biggest == 0.0 {
        return None;
    }
    let qtb = qr.q().transpose() * b;
    let coef = r.solve_upper_triangular(&qtb)?;
    // Centered at x0, so the fit at x0 is the intercept.
    Some(coef[0])
}

/// Local polynomial fit at a single point.
pub fn local_poly_fit_at(x: &[f64], y: &[f64], x0: f64, degree: usize, bandwidth: f64) -> Result<f64> {
    let n = x.len();
    let mut dist: Vec<f64> = x.iter().map(|xi| (xi - x0).abs()).collect();
    dist.sort_by(f64::total_cmp);
    let q = ((bandwidth * n as f64).ceil() as usize).clamp(1, n);
    let h = dist[q - 1];
    if h > 0.0 {
        if let Some(v) = solve_local(x, y, x0, h, degree) {
            return Ok(v);
        }
    }
    let q2 = (2 * q).min(n);
    let h2 = 1.1 * dist[q2 - 1];
    if h2 > 0.0 {
        if let Some(v) = solve_local(x, y, x0, h2, degree) {
            return Ok(v);
        }
    }
    Err(Error::Degenerate(format!(
        "local design at x = {x0} is singular even after widening the window"
    )))
}

fn check(x: &[f64], y: &[f64], degree: usize, bandwidth: f64) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), actual: y.len() });
    }
    if x.len() < degree + 2 {
        return Err(Error::InvalidInput(format!(
            "degree {degree} smoothing needs at least {} points, got {}",
            degree + 2,
            x.len()
        )));
    }
    if !(bandwidth > 0.0 && bandwidth <= 1.0) {
        return Err(Error::InvalidInput(format!("bandwidth must lie in (0, 1], got {bandwidth}")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite value in smoother input".into()));
    }
    Ok(())
}

/// Fits the smoother on the percentile grid 0, 1, …, 100.
pub fn local_poly_smooth(x: &[f64], y: &[f64], degree: usize, bandwidth: f64) -> Result<SmoothCurve> {
    check(x, y, degree, bandwidth)?;
    let grid_x: Vec<f64> = (0..=100).map(f64::from).collect();
    let fitted_y = grid_x
        .iter()
        .map(|&g| local_poly_fit_at(x, y, g, degree, bandwidth))
        .collect::<Result<Vec<_>>>()?;
    Ok(SmoothCurve { grid_x, fitted_y, bandwidth, degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Weighted normal equations in raw powers of x, weights from an
    /// explicit scan of all points.
    fn wls_oracle(x: &[f64], y: &[f64], x0: f64, degree: usize, bandwidth: f64) -> f64 {
        let n = x.len();
        let q = (bandwidth * n as f64).ceil() as usize;
        let mut d: Vec<f64> = x.iter().map(|v| (v - x0).abs()).collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let h = d[q - 1];
        let p = degree + 1;
        let mut xtx = DMatrix::<f64>::zeros(p, p);
        let mut xty = DVector::<f64>::zeros(p);
        for i in 0..n {
            let u = (x[i] - x0).abs() / h;
            let w = if u < 1.0 { (1.0 - u.powi(3)).powi(3) } else { 0.0 };
            for a in 0..p {
                xty[a] += w * x[i].powi(a as i32) * y[i];
                for b in 0..p {
                    xtx[(a, b)] += w * x[i].powi((a + b) as i32);
                }
            }
        }
        let c = xtx.lu().solve(&xty).unwrap();
        (0..p).map(|a| c[a] * x0.powi(a as i32)).sum()
    }

    #[test]
    fn constant_stays_constant() {
        let x: Vec<f64> = (0..30).map(|i| f64::from(i) * 3.3).collect();
        let c = local_poly_smooth(&x, &vec![4.2; 30], 2, 0.6).unwrap();
        assert!(c.fitted_y.iter().all(|v| (v - 4.2).abs() < 1e-9));
        assert_eq!(c.grid_x.len(), 101);
    }

    #[test]
    fn noisy_sine_matches_wls_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x: Vec<f64> = (0..120).map(|_| rng.random_range(0.0..100.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| (v / 15.0).sin() + rng.random_range(-0.3..0.3)).collect();
        let c = local_poly_smooth(&x, &y, 2, 0.3).unwrap();
        for (g, f) in c.grid_x.iter().zip(&c.fitted_y) {
            let o = wls_oracle(&x, &y, *g, 2, 0.3);
            assert!((f - o).abs() < 1e-9, "at {g}: {f} vs {o}");
        }
    }

    #[test]
    fn tied_window_widens_then_fails() {
        // Ten copies of x = 0 and one far point: the 5-point window at
        // x0 = 0 has h = 0, widening to 10 points still has one distinct x.
        let mut x = vec![0.0; 10];
        x.push(50.0);
        let y: Vec<f64> = (0..11).map(f64::from).collect();
        assert!(matches!(local_poly_fit_at(&x, &y, 0.0, 2, 0.4), Err(Error::Degenerate(_))));
        // With a full window the far point joins and a line is estimable.
        assert!(local_poly_fit_at(&x, &y, 0.0, 1, 1.0).is_ok());
    }

    #[test]
    fn rejects_bad_arguments() {
        let x = [1.0, 2.0, 3.0];
        assert!(local_poly_smooth(&x, &x, 2, 0.5).is_err());
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!(local_poly_smooth(&x, &x, 2, 0.0).is_err());
        assert!(local_poly_smooth(&x, &x, 2, 1.5).is_err());
    }

    proptest! {
        #[test]
        fn reproduces_quadratics(a in -5.0..5.0f64, b in -0.2..0.2f64, c in -0.01..0.01f64, bw in 0.2..1.0f64) {
            let x: Vec<f64> = (0..40).map(|i| f64::from(i) * 2.5 + 0.3).collect();
            let y: Vec<f64> = x.iter().map(|v| a + b * v + c * v * v).collect();
            let curve = local_poly_smooth(&x, &y, 2, bw).unwrap();
            for (g, f) in curve.grid_x.iter().zip(&curve.fitted_y) {
                prop_assert!((f - (a + b * g + c * g * g)).abs() < 1e-9);
            }
        }
    }
}
