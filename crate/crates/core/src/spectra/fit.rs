//! Goodness-of-fit helpers.

/// Linear-interpolated quantile of an ascending slice (`p` in `[0, 1]`).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let pos = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let t = pos - lo as f64;
    sorted[lo] * (1.0 - t) + sorted[hi] * t
}

/// One-sample Kolmogorov–Smirnov distance `sup |F_n − F|`.
pub fn ks_statistic(samples: &[f64], mut cdf: impl FnMut(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

fn quadrant_fractions(points: &[(f64, f64)], origin: (f64, f64)) -> [f64; 4] {
    let mut counts = [0usize; 4];
    for &(x, y) in points {
        let q = match (x > origin.0, y > origin.1) {
            (true, true) => 0,
            (false, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        };
        counts[q] += 1;
    }
    let n = points.len() as f64;
    counts.map(|k| k as f64 / n)
}

/// Two-sample, two-dimensional KS distance (Fasano–Franceschini): the
/// largest quadrant-fraction gap over origins at every sample point.
pub fn ks_statistic_2d(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let mut d = 0.0f64;
    for &origin in a.iter().chain(b) {
        let fa = quadrant_fractions(a, origin);
        let fb = quadrant_fractions(b, origin);
        for q in 0..4 {
            d = d.max((fa[q] - fb[q]).abs());
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_interpolates() {
        let v = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(quantile(&v, 0.0), 0.0);
        assert_eq!(quantile(&v, 1.0), 3.0);
        assert!((quantile(&v, 0.5) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn ks_of_uniform_grid() {
        let n = 100;
        let v: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&v, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn ks_2d_identical_and_disjoint() {
        let a: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, (i * 7 % 50) as f64)).collect();
        assert_eq!(ks_statistic_2d(&a, &a), 0.0);
        let b: Vec<(f64, f64)> = a.iter().map(|(x, y)| (x + 1000.0, y + 1000.0)).collect();
        assert!(ks_statistic_2d(&a, &b) > 0.9);
    }
}
