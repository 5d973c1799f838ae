//! Finite-blocklength normal approximation `R(ε, n) = C − √(V/n)·Q⁻¹(ε)`.
//!
//! Rates are in bits per channel use, dispersions in bits² per channel use.
//! Only the two leading terms are computed.

use std::f64::consts::{LOG2_E, SQRT_2};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FblChannel {
    /// Capacity `C`, bits per channel use.
    pub capacity: f64,
    /// Dispersion `V`, bits² per channel use.
    pub dispersion: f64,
}

impl FblChannel {
    pub fn new(capacity: f64, dispersion: f64) -> Result<Self> {
        if !(capacity.is_finite() && capacity >= 0.0) {
            return Err(Error::InvalidParameter(format!("capacity {capacity} must be finite and >= 0")));
        }
        if !(dispersion.is_finite() && dispersion >= 0.0) {
            return Err(Error::InvalidParameter(format!("dispersion {dispersion} must be finite and >= 0")));
        }
        Ok(Self { capacity, dispersion })
    }
}

/// Upper tail of the standard normal, `Q(x) = ½ erfc(x/√2)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

fn check_probability(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("error probability {eps} outside (0, 1)")));
    }
    Ok(())
}

const Q_INVERSE_TOL: f64 = 1e-10;

/// `Q⁻¹(ε)` by Newton iteration on `ln Q(x) − ln ε`, kept inside a
/// shrinking bracket and falling back to bisection whenever a step leaves it.
/// Upper-half probabilities use `Q⁻¹(ε) = −Q⁻¹(1 − ε)`, exact in floating
/// point for `ε ≥ ½`.
pub fn q_inverse(eps: f64) -> Result<f64> {
    check_probability(eps)?;
    if eps == 0.5 {
        return Ok(0.0);
    }
    if eps > 0.5 {
        return Ok(-q_inverse(1.0 - eps)?);
    }
    let target = eps.ln();
    let (mut lo, mut hi) = (0.0f64, 40.0f64);
    let mut x = 1.0;
    for _ in 0..200 {
        let q = q_function(x);
        let g = q.ln() - target;
        if g == 0.0 {
            return Ok(x);
        }
        // ln Q is decreasing: g > 0 means the root lies to the right
        if g > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let density = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let newton = x + g * q / density;
        let next = if density > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= Q_INVERSE_TOL * 1e-3 || hi - lo <= Q_INVERSE_TOL * 1e-3 {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// `C − √(V/n)·Q⁻¹(ε)`; negative values for tiny `n` are returned as-is.
pub fn normal_approx_rate(ch: &FblChannel, eps: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("blocklength must be at least 1".into()));
    }
    let q = q_inverse(eps)?;
    Ok(ch.capacity - (ch.dispersion / n as f64).sqrt() * q)
}

/// Smallest blocklength whose normal-approximation rate reaches `target`.
///
/// Starts from `⌈V (Q⁻¹(ε) / (C − target))²⌉` and corrects by direct
/// evaluation so rounding never hides the exact integer boundary.
pub fn blocklength_for_rate(ch: &FblChannel, eps: f64, target: f64) -> Result<u64> {
    check_probability(eps)?;
    if !(target.is_finite() && target >= 0.0) {
        return Err(Error::InvalidParameter(format!("target rate {target} must be finite and >= 0")));
    }
    let q = q_inverse(eps)?;
    let rate = |n: u64| ch.capacity - (ch.dispersion / n as f64).sqrt() * q;
    if rate(1) >= target {
        return Ok(1);
    }
    if q <= 0.0 || ch.dispersion == 0.0 || target >= ch.capacity {
        return Err(Error::InvalidParameter(format!(
            "target rate {target} is unreachable for capacity {} at error probability {eps}",
            ch.capacity
        )));
    }
    let estimate = ch.dispersion * (q / (ch.capacity - target)).powi(2);
    if !(estimate < 1e18) {
        return Err(Error::InvalidParameter("required blocklength overflows".into()));
    }
    let mut n = (estimate.ceil() as u64).max(1);
    while n > 1 && rate(n - 1) >= target {
        n -= 1;
    }
    while rate(n) < target {
        n += 1;
    }
    Ok(n)
}

/// Real AWGN channel at linear SNR: `C = ½ log₂(1+snr)`,
/// `V = snr(snr+2) / (2(snr+1)²) · log₂²e`.
pub fn awgn_channel(snr: f64) -> Result<FblChannel> {
    if !(snr.is_finite() && snr >= 0.0) {
        return Err(Error::InvalidParameter(format!("snr {snr} must be finite and >= 0")));
    }
    let capacity = 0.5 * (1.0 + snr).log2();
    let dispersion = snr * (snr + 2.0) / (2.0 * (snr + 1.0).powi(2)) * LOG2_E * LOG2_E;
    FblChannel::new(capacity, dispersion)
}

/// `points` log-spaced distinct blocklengths in `[n_min, n_max]` with their
/// rates.
pub fn rate_table(ch: &FblChannel, eps: f64, n_min: u64, n_max: u64, points: usize) -> Result<Vec<(u64, f64)>> {
    if n_min == 0 || n_max < n_min || points == 0 {
        return Err(Error::InvalidParameter(format!(
            "bad blocklength grid [{n_min}, {n_max}] with {points} points"
        )));
    }
    let (a, b) = ((n_min as f64).ln(), (n_max as f64).ln());
    let mut grid: Vec<u64> = (0..points)
        .map(|i| {
            let t = if points == 1 { 0.0 } else { i as f64 / (points - 1) as f64 };
            ((a + t * (b - a)).exp().round() as u64).clamp(n_min, n_max)
        })
        .collect();
    grid.dedup();
    grid.into_iter().map(|n| Ok((n, normal_approx_rate(ch, eps, n)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Q(x) from the Maclaurin series of erf, independent of libm.
    fn q_series(x: f64) -> f64 {
        let z = x / SQRT_2;
        let mut term = z;
        let mut sum = z;
        for n in 1..200 {
            term *= -z * z / n as f64;
            let add = term / (2 * n + 1) as f64;
            sum += add;
            if add.abs() < 1e-17 {
                break;
            }
        }
        0.5 - sum / std::f64::consts::PI.sqrt()
    }

    fn q_inverse_oracle(eps: f64) -> f64 {
        let (mut lo, mut hi) = (-6.0, 6.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if q_series(mid) > eps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn symmetry_point() {
        assert_eq!(q_function(0.0), 0.5);
        assert_eq!(q_inverse(0.5).unwrap(), 0.0);
    }

    #[test]
    fn reflection_identity() {
        for x in [0.5, 1.0, 2.0] {
            assert!((q_function(-x) - (1.0 - q_function(x))).abs() < 1e-12);
        }
    }

    #[test]
    fn q_inverse_against_series_oracle() {
        let oracle = q_inverse_oracle(0.10);
        assert!((oracle - 1.28155).abs() < 1e-4);
        assert!((q_inverse(0.10).unwrap() - oracle).abs() < 1e-10);
        for eps in [1e-3, 0.02, 0.3, 0.7, 0.95] {
            assert!((q_inverse(eps).unwrap() - q_inverse_oracle(eps)).abs() < 1e-10, "eps={eps}");
        }
    }

    #[test]
    fn q_inverse_extreme_tails() {
        for eps in [1e-12, 1e-100, 1.0 - 1e-12] {
            let x = q_inverse(eps).unwrap();
            assert!((q_function(x) / eps - 1.0).abs() < 1e-6, "eps={eps}, x={x}");
        }
        assert!(q_inverse(0.0).is_err());
        assert!(q_inverse(1.0).is_err());
        assert!(q_inverse(f64::NAN).is_err());
    }

    #[test]
    fn rate_special_cases() {
        let ch = FblChannel::new(0.7, 2.5).unwrap();
        for n in [1, 10, 1000] {
            assert_eq!(normal_approx_rate(&ch, 0.5, n).unwrap(), 0.7);
        }
        let flat = FblChannel::new(0.7, 0.0).unwrap();
        assert_eq!(normal_approx_rate(&flat, 1e-3, 5).unwrap(), 0.7);
        assert!(normal_approx_rate(&ch, 0.1, 0).is_err());
    }

    #[test]
    fn worked_rate_example() {
        // Q⁻¹(1e-3) = 3.090232..., √(1/1000) = 0.0316228
        let ch = FblChannel::new(0.5, 1.0).unwrap();
        let q = q_inverse_oracle(1e-3);
        assert!((q - 3.0902).abs() < 1e-4);
        let r = normal_approx_rate(&ch, 1e-3, 1000).unwrap();
        assert!((r - (0.5 - q / 1000f64.sqrt())).abs() < 1e-12);
        assert!((r - 0.40228).abs() < 1e-5);
    }

    #[test]
    fn blocklength_examples() {
        let q = q_inverse(1e-3).unwrap();
        let wide = FblChannel::new(5.0, 1.0).unwrap();
        assert_eq!(blocklength_for_rate(&wide, 1e-3, 5.0 - q).unwrap(), 1);
        assert_eq!(blocklength_for_rate(&wide, 1e-3, 5.0 - q + 1e-9).unwrap(), 2);
        let ch = FblChannel::new(0.5, 1.0).unwrap();
        let n = blocklength_for_rate(&ch, 1e-3, 0.45).unwrap();
        assert_eq!(n, 3820);
        // direct search oracle
        let first = (1..10_000u64).find(|&m| normal_approx_rate(&ch, 1e-3, m).unwrap() >= 0.45).unwrap();
        assert_eq!(n, first);
        assert!(blocklength_for_rate(&ch, 1e-3, 0.5).is_err());
        assert!(blocklength_for_rate(&ch, 1e-3, 0.6).is_err());
    }

    #[test]
    fn awgn_helper() {
        let zero = awgn_channel(0.0).unwrap();
        assert_eq!((zero.capacity, zero.dispersion), (0.0, 0.0));
        assert!((awgn_channel(1.0).unwrap().capacity - 0.5).abs() < 1e-15);
        let high = awgn_channel(1e6).unwrap();
        assert!((high.dispersion - 0.5 * LOG2_E * LOG2_E).abs() < 1e-5);
        // ½·log₂²e = 1.040684...; quoted elsewhere to three places as 1.0410
        assert!((0.5 * LOG2_E * LOG2_E - 1.040684).abs() < 1e-6);
        assert!((high.dispersion - 1.0410).abs() < 1e-3);
        assert!(awgn_channel(-1.0).is_err());
    }

    #[test]
    fn gap_scaling_is_exact() {
        let ch = FblChannel::new(1.2, 0.8).unwrap();
        let eps = 1e-3;
        let q = q_inverse(eps).unwrap();
        let reference = ch.dispersion * q * q;
        for n in [100u64, 1_000, 10_000, 100_000, 1_000_000] {
            let r = normal_approx_rate(&ch, eps, n).unwrap();
            let g = n as f64 * (ch.capacity - r).powi(2);
            assert!((g - reference).abs() <= 1e-9 * reference);
        }
    }

    #[test]
    fn rate_table_grid() {
        let ch = FblChannel::new(0.5, 1.0).unwrap();
        let t = rate_table(&ch, 1e-3, 100, 1_000_000, 9).unwrap();
        assert_eq!(t.first().unwrap().0, 100);
        assert_eq!(t.last().unwrap().0, 1_000_000);
        assert!(t.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
    }

    proptest! {
        #[test]
        fn below_half_rate_increases_toward_capacity(eps in 1e-6f64..0.49, n in 1u64..100_000, c in 0.1f64..5.0, v in 0.01f64..4.0) {
            let ch = FblChannel::new(c, v).unwrap();
            let r1 = normal_approx_rate(&ch, eps, n).unwrap();
            let r2 = normal_approx_rate(&ch, eps, n + 1).unwrap();
            prop_assert!(r1 < r2 && r2 < c);
        }

        #[test]
        fn above_half_rate_exceeds_capacity(eps in 0.51f64..0.999, n in 1u64..100_000) {
            let ch = FblChannel::new(1.0, 1.0).unwrap();
            prop_assert!(normal_approx_rate(&ch, eps, n).unwrap() > 1.0);
        }

        #[test]
        fn blocklength_roundtrip(eps in 1e-6f64..0.49, n in 1u64..200_000) {
            let ch = FblChannel::new(0.8, 1.5).unwrap();
            let r = normal_approx_rate(&ch, eps, n).unwrap();
            if r >= 0.0 {
                prop_assert!(blocklength_for_rate(&ch, eps, r).unwrap() <= n);
            }
        }

        #[test]
        fn blocklength_monotone_in_target(eps in 1e-6f64..0.49, t1 in 0.0f64..0.79, t2 in 0.0f64..0.79) {
            let ch = FblChannel::new(0.8, 1.5).unwrap();
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(blocklength_for_rate(&ch, eps, lo).unwrap() <= blocklength_for_rate(&ch, eps, hi).unwrap());
        }
    }
}
