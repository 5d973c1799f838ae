//! Closed-form reference laws.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Marchenko–Pastur law with aspect ratio `c = n/N` and noise variance `σ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpLaw {
    pub c: f64,
    pub sigma2: f64,
}

impl MpLaw {
    pub fn new(c: f64, sigma2: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!("aspect ratio {c} must be positive and finite")));
        }
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::InvalidParameter(format!("noise variance {sigma2} must be positive")));
        }
        Ok(Self { c, sigma2 })
    }
}

/// Support edges `(σ²(1−√c)², σ²(1+√c)²)`.
pub fn mp_support(law: &MpLaw) -> (f64, f64) {
    let s = law.c.sqrt();
    (law.sigma2 * (1.0 - s).powi(2), law.sigma2 * (1.0 + s).powi(2))
}

/// Absolutely continuous part of the MP density. For `c > 1` it integrates to
/// `1/c`; the remaining mass sits at zero, see [`mp_atom`].
pub fn mp_density(x: f64, law: &MpLaw) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("mp_density argument"));
    }
    let (a, b) = mp_support(law);
    if x <= a || x >= b || x <= 0.0 {
        return Ok(0.0);
    }
    Ok(((b - x) * (x - a)).sqrt() / (2.0 * PI * law.sigma2 * law.c * x))
}

/// Point mass at zero, `max(0, 1 − 1/c)`.
pub fn mp_atom(law: &MpLaw) -> f64 {
    (1.0 - 1.0 / law.c).max(0.0)
}

const CDF_PANELS: usize = 4096;

/// Continuous part of the CDF on `[a, min(x, b)]`.
///
/// Substituting `x = m − h cos θ` (midpoint `m`, half-width `h`) turns the
/// square-root edges into `h² sin²θ`, leaving a smooth integrand that
/// composite Simpson handles to near machine precision.
fn mp_continuous_cdf(x: f64, law: &MpLaw) -> f64 {
    let (a, b) = mp_support(law);
    if x <= a {
        return 0.0;
    }
    let total = law.c.recip().min(1.0);
    if x >= b {
        return total;
    }
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let theta_x = ((m - x) / h).clamp(-1.0, 1.0).acos();
    let g = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let xt = m - h * c;
        if xt <= 0.0 {
            // only reachable at θ = 0 when a = 0 (c = 1): limit of h² sin²θ / x
            return h * 2.0 / (2.0 * PI * law.sigma2 * law.c);
        }
        h * h * s * s / (2.0 * PI * law.sigma2 * law.c * xt)
    };
    let step = theta_x / CDF_PANELS as f64;
    let mut acc = g(0.0) + g(theta_x);
    for k in 1..CDF_PANELS {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(k as f64 * step);
    }
    (acc * step / 3.0).min(total)
}

/// Cumulative distribution including the atom at zero when `c > 1`.
pub fn mp_cdf(x: f64, law: &MpLaw) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("mp_cdf argument"));
    }
    let atom = if x >= 0.0 { mp_atom(law) } else { 0.0 };
    Ok(atom + mp_continuous_cdf(x, law))
}

/// Average continuous density over `[lo, hi]`, the value a density-normalised
/// histogram bin should show.
pub fn mp_bin_average(lo: f64, hi: f64, law: &MpLaw) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidParameter(format!("bad bin [{lo}, {hi}]")));
    }
    Ok((mp_continuous_cdf(hi, law) - mp_continuous_cdf(lo, law)) / (hi - lo))
}

/// Inverse CDF by bisection; `p` in `(0, 1)`.
pub fn mp_quantile(p: f64, law: &MpLaw) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("probability {p} outside (0, 1)")));
    }
    if p <= mp_atom(law) {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = mp_support(law);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mp_cdf(mid, law)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Ring law for a product of `factors` standardized singular-value-equivalent
/// matrices with aspect ratio `c ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingLaw {
    pub c: f64,
    pub factors: usize,
}

impl RingLaw {
    pub fn new(c: f64, factors: usize) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::InvalidParameter(format!("ring law needs c in (0, 1], got {c}")));
        }
        if factors == 0 {
            return Err(Error::InvalidParameter("ring law needs at least one factor".into()));
        }
        Ok(Self { c, factors })
    }
}

/// `((1−c)^{L/2}, 1)`.
pub fn ring_law_radii(law: &RingLaw) -> Result<(f64, f64)> {
    let law = RingLaw::new(law.c, law.factors)?;
    Ok(((1.0 - law.c).powf(law.factors as f64 / 2.0), 1.0))
}

/// Radial CDF of the ring law, `(r^{2/L} − (1 − c)) / c` on the annulus.
pub fn ring_law_radial_cdf(r: f64, law: &RingLaw) -> f64 {
    let (inner, outer) = ((1.0 - law.c).powf(law.factors as f64 / 2.0), 1.0);
    if r <= inner {
        0.0
    } else if r >= outer {
        1.0
    } else {
        (r.powf(2.0 / law.factors as f64) - (1.0 - law.c)) / law.c
    }
}

/// Radial CDF `r^{2/k}` of the eigenvalue moduli of a product of `k`
/// Ginibre matrices.
pub fn ginibre_product_radial_cdf(r: f64, k: usize) -> f64 {
    if r <= 0.0 {
        0.0
    } else if r >= 1.0 {
        1.0
    } else {
        r.powf(2.0 / k as f64)
    }
}
