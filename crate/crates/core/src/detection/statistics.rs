use super::DetectorResult;
use crate::ensembles::{normalized_trace, DataMatrix};
use crate::spectra::{mp_quantile, mp_support, ring_law_radii, MpLaw, RingLaw, Spectrum, SpectrumKind};
use crate::{Error, Result};

/// Normalised trace of the hollow Wishart matrix, `Z = (1/n) Tr(W_n)`,
/// against `threshold` (0 in the basic rule).
pub fn trace_detector(x: &DataMatrix, sigma: f64, threshold: f64) -> Result<DetectorResult> {
    Ok(DetectorResult::decide(normalized_trace(x, sigma)?, threshold))
}

/// Classical energy detector `(1/nN) ‖X‖²_F`.
pub fn energy_statistic(x: &DataMatrix) -> Result<f64> {
    normalized_trace(x, 0.0)
}

/// Plug-in noise variance: the median sample-covariance eigenvalue divided
/// by the median of the unit-variance MP law with the same aspect ratio.
pub fn estimate_noise_variance(spec: &Spectrum, c: f64) -> Result<f64> {
    if spec.kind != SpectrumKind::Hermitian || spec.is_empty() {
        return Err(Error::InvalidParameter("noise estimate needs a non-empty hermitian spectrum".into()));
    }
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::InvalidParameter(format!("median noise estimate needs c in (0, 1], got {c}")));
    }
    let mut values = spec.real_parts();
    values.sort_by(f64::total_cmp);
    let median = crate::spectra::quantile(&values, 0.5);
    Ok(median / mp_quantile(0.5, &MpLaw::new(c, 1.0)?)?)
}

fn check_ratio(spec: &Spectrum, c: f64) -> Result<()> {
    if let Some(sc) = spec.c {
        if (sc - c).abs() > 1e-12 * c.max(1.0) {
            return Err(Error::DimensionMismatch(format!(
                "spectrum has aspect ratio {sc}, law expects {c}"
            )));
        }
    }
    Ok(())
}

/// Fraction of eigenvalues above `b·(1 + margin)`, with `b` the MP upper
/// edge. Any detached eigenvalue means H1.
pub fn mp_outlier_detector(spec: &Spectrum, law: &MpLaw, margin: f64) -> Result<DetectorResult> {
    if spec.kind != SpectrumKind::Hermitian {
        return Err(Error::InvalidParameter("MP outlier detector needs a hermitian spectrum".into()));
    }
    if spec.is_empty() {
        return Err(Error::InvalidParameter("empty spectrum".into()));
    }
    if !(margin >= 0.0) {
        return Err(Error::InvalidParameter(format!("margin {margin} must be >= 0")));
    }
    check_ratio(spec, law.c)?;
    let (_, b) = mp_support(law);
    let edge = b * (1.0 + margin);
    let above = spec.eigenvalues.iter().filter(|z| z.re > edge).count();
    Ok(DetectorResult::decide(above as f64 / spec.len() as f64, 0.0))
}

/// Fraction of eigenvalues with `|λ| < inner·(1 − margin)`. Requires
/// `c ∈ (0, 1)`: at `c = 1` the inner radius is zero and the test is vacuous.
pub fn ring_inner_detector(spec: &Spectrum, law: &RingLaw, margin: f64) -> Result<DetectorResult> {
    if !(law.c > 0.0 && law.c < 1.0) {
        return Err(Error::InvalidParameter(format!("ring detector needs c in (0, 1), got {}", law.c)));
    }
    if !(0.0..=1.0).contains(&margin) {
        return Err(Error::InvalidParameter(format!("margin {margin} must lie in [0, 1]")));
    }
    if spec.is_empty() {
        return Err(Error::InvalidParameter("empty spectrum".into()));
    }
    check_ratio(spec, law.c)?;
    let (inner, _) = ring_law_radii(law)?;
    let radius = inner * (1.0 - margin);
    let below = spec.eigenvalues.iter().filter(|z| z.norm() < radius).count();
    Ok(DetectorResult::decide(below as f64 / spec.len() as f64, 0.0))
}
