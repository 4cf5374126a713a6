use crate::error::{Error, Result};

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), actual: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 observations, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite observation".into()));
    }
    Ok(())
}

/// Product-moment correlation, clamped to [−1, 1].
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate("correlation of a constant series".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks with ties sharing their average rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end hold ranks start+1 ..= end.
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    pearson(&midranks(x), &midranks(y))
}

/// Percentile of each value's midrank: 100·(rank − 1)/(n − 1).  A sample
/// with every value tied sits at 50.
pub fn percentile_rank(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::InvalidInput("percentile ranks need at least 2 values".into()));
    }
    let denom = values.len() as f64 - 1.0;
    Ok(midranks(values)
        .into_iter()
        .map(|r| 100.0 * (r - 1.0) / denom)
        .collect())
}

/// Number of tied pairs within runs of equal keys in an already sorted slice.
fn tied_pairs<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Merge sort counting strict inversions (pairs i<j with v[i] > v[j]).
fn count_inversions(v: &mut [f64], buf: &mut Vec<f64>) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = count_inversions(&mut v[..mid], buf) + count_inversions(&mut v[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j] < v[i] {
            swaps += (mid - i) as u64;
            buf.push(v[j]);
            j += 1;
        } else {
            buf.push(v[i]);
            i += 1;
        }
    }
    buf.extend_from_slice(&v[i..mid]);
    buf.extend_from_slice(&v[j..n]);
    v.copy_from_slice(buf);
    swaps
}

/// Kendall's tau-b in O(n log n) (Knight's algorithm).
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let n = x.len() as u64;
    // `+ 0.0` folds −0.0 into 0.0 so the total order agrees with `==`.
    let mut pairs: Vec<(f64, f64)> = x.iter().zip(y).map(|(a, b)| (a + 0.0, b + 0.0)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let tied_x = tied_pairs(&xs);
    let tied_xy = tied_pairs(&pairs);
    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = Vec::with_capacity(ys.len());
    let discordant = count_inversions(&mut ys, &mut buf);
    let tied_y = tied_pairs(&ys);

    let n0 = n * (n - 1) / 2;
    if tied_x == n0 || tied_y == n0 {
        return Err(Error::Degenerate("Kendall tau of an all-tied series".into()));
    }
    // Concordant minus discordant, from pairs neither tied in x nor in y.
    let concordant_minus_discordant =
        n0 as i128 - tied_x as i128 - tied_y as i128 + tied_xy as i128 - 2 * discordant as i128;
    let denom = (((n0 - tied_x) as f64) * ((n0 - tied_y) as f64)).sqrt();
    Ok((concordant_minus_discordant as f64 / denom).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Pairwise-difference form: r = Σ_{i<j} Δx Δy / √(Σ Δx² Σ Δy²).
    fn pearson_pairwise(x: &[f64], y: &[f64]) -> f64 {
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                let (dx, dy) = (x[i] - x[j], y[i] - y[j]);
                sxy += dx * dy;
                sxx += dx * dx;
                syy += dy * dy;
            }
        }
        sxy / (sxx * syy).sqrt()
    }

    fn kendall_pairwise(x: &[f64], y: &[f64]) -> f64 {
        let (mut s, mut tx, mut ty, mut n0) = (0i64, 0i64, 0i64, 0i64);
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                n0 += 1;
                let a = (x[i] - x[j]).signum() as i64 * (x[i] != x[j]) as i64;
                let b = (y[i] - y[j]).signum() as i64 * (y[i] != y[j]) as i64;
                s += a * b;
                tx += (a == 0) as i64;
                ty += (b == 0) as i64;
            }
        }
        s as f64 / (((n0 - tx) * (n0 - ty)) as f64).sqrt()
    }

    #[test]
    fn pearson_examples() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap() - 1.0).abs() < 1e-15);
        let x = [1.0, 4.0, 2.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v| -2.0 * v + 3.0).collect();
        assert!((pearson(&x, &y).unwrap() + 1.0).abs() < 1e-15);
        // Sxy = 3, Sxx = 2, Syy = 14/3.
        let r = pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap();
        assert!((r - 3.0 / (28.0_f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((r - 0.981_980_506).abs() < 1e-9);
    }

    #[test]
    fn kendall_treats_signed_zeros_as_tied() {
        let x = [-0.0, 0.0, -0.0, 1.0];
        let y = [3.0, 1.0, 2.0, 4.0];
        assert!((kendall_tau(&x, &y).unwrap() - kendall_pairwise(&x, &y)).abs() < 1e-15);
    }

    #[test]
    fn pearson_rejects_constants() {
        assert!(matches!(pearson(&[1.0, 1.0], &[1.0, 2.0]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn spearman_examples() {
        // 1 − 6·Σd²/(n(n²−1)) with d = (0, −1, 1): 1 − 12/24.
        assert!((spearman(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
        let x = [0.3, 1.2, -4.0, 2.2, 0.0];
        let fx: Vec<f64> = x.iter().map(|v: &f64| v.exp()).collect();
        assert!((spearman(&x, &fx).unwrap() - 1.0).abs() < 1e-15);
        let rev: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((spearman(&x, &rev).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn kendall_examples() {
        // Pairs (1,2) concordant, (1,3) concordant, (2,3) discordant.
        let t = kendall_tau(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(kendall_tau(&[1.0, 5.0, 2.0], &[1.0, 5.0, 2.0]).unwrap(), 1.0);
        let y_tied = [1.0, 2.0, 2.0, 4.0, 3.0];
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!((kendall_tau(&x, &y_tied).unwrap() - kendall_pairwise(&x, &y_tied)).abs() < 1e-12);
        assert!(kendall_tau(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn midranks_average_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 1.0, 2.0]), vec![4.0, 1.5, 1.5, 3.0]);
    }

    #[test]
    fn percentile_examples() {
        let p = percentile_rank(&[10.0, 20.0, 30.0, 40.0]).unwrap();
        let expected = [0.0, 100.0 / 3.0, 200.0 / 3.0, 100.0];
        for (a, b) in p.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(percentile_rank(&[7.0; 4]).unwrap(), vec![50.0; 4]);
        let p = percentile_rank(&[1.0, 1.0, 5.0, 6.0, 7.0]).unwrap();
        assert_eq!(&p[..2], &[12.5, 12.5]);
    }

    fn data(max_len: usize, levels: i32) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (3..max_len).prop_flat_map(move |n| {
            (
                prop::collection::vec((-levels..levels).prop_map(|v| v as f64 * 0.5), n),
                prop::collection::vec((-levels..levels).prop_map(|v| v as f64 * 0.25), n),
            )
        })
    }

    proptest! {
        #[test]
        fn kendall_matches_pair_counting((x, y) in data(60, 6)) {
            let (tx, ty) = (kendall_pairwise(&x, &y), kendall_tau(&x, &y));
            match ty {
                Ok(t) => prop_assert!((t - tx).abs() < 1e-12, "{t} vs {tx}"),
                Err(_) => prop_assert!(tx.is_nan()),
            }
        }

        #[test]
        fn pearson_matches_pairwise_form((x, y) in data(60, 1000)) {
            if let Ok(r) = pearson(&x, &y) {
                prop_assert!((r - pearson_pairwise(&x, &y)).abs() < 1e-12);
                prop_assert!((-1.0..=1.0).contains(&r));
            }
        }

        #[test]
        fn spearman_is_rank_invariant((x, y) in data(40, 50)) {
            if let Ok(r) = spearman(&x, &y) {
                let fx: Vec<f64> = x.iter().map(|v| v * v * v + 2.0 * v).collect();
                let gy: Vec<f64> = y.iter().map(|v| (v / 10.0).exp()).collect();
                prop_assert!((spearman(&fx, &gy).unwrap() - r).abs() < 1e-12);
            }
        }

        #[test]
        fn percentile_is_rank_invariant(x in prop::collection::vec(-100i32..100, 2..50)) {
            let x: Vec<f64> = x.into_iter().map(f64::from).collect();
            let fx: Vec<f64> = x.iter().map(|v| v.powi(3) + 5.0).collect();
            prop_assert_eq!(percentile_rank(&x).unwrap(), percentile_rank(&fx).unwrap());
        }
    }
}
