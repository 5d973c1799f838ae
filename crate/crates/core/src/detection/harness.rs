//! Seeded Monte Carlo threshold calibration and ROC estimation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::statistics::{
    energy_statistic, estimate_noise_variance, mp_outlier_detector, ring_inner_detector, trace_detector,
};
use crate::ensembles::{sample_covariance, DataMatrix, EnsembleSpec, Realization};
use crate::seed::{derive_seed, Stream};
use crate::spectra::{eig_hermitian, MpLaw, RingLaw};
use crate::{Error, Result};

/// Fewest trials accepted by the calibration and ROC routines.
pub const MIN_TRIALS: usize = 100;

fn default_margin() -> f64 {
    0.05
}

/// Where the trace detector takes `σ` from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseLevel {
    /// The generating noise level, or `sigma` when given.
    #[default]
    Known,
    /// Median-eigenvalue plug-in estimate from the same data.
    Estimated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DetectorSpec {
    Trace {
        #[serde(default)]
        noise: NoiseLevel,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<f64>,
    },
    /// `(1/nN)‖X‖²_F`, the classical baseline.
    Energy,
    MpOutlier {
        #[serde(default = "default_margin")]
        margin: f64,
    },
    RingInner {
        #[serde(default = "default_margin")]
        margin: f64,
    },
}

impl DetectorSpec {
    pub fn trace() -> Self {
        Self::Trace { noise: NoiseLevel::Known, sigma: None }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Trace { sigma: Some(s), .. } if !(s.is_finite() && *s >= 0.0) => {
                Err(Error::InvalidParameter(format!("sigma {s} must be finite and nonnegative")))
            }
            Self::Trace { noise: NoiseLevel::Estimated, sigma: Some(_) } => {
                Err(Error::InvalidParameter("an estimated noise level cannot also be given".into()))
            }
            Self::MpOutlier { margin } if !(*margin >= 0.0) => {
                Err(Error::InvalidParameter(format!("margin {margin} must be >= 0")))
            }
            Self::RingInner { margin } if !(0.0..=1.0).contains(margin) => {
                Err(Error::InvalidParameter(format!("margin {margin} must lie in [0, 1]")))
            }
            _ => Ok(()),
        }
    }

    /// Threshold of the fixed decision rule: zero for every detector here.
    pub fn default_threshold(&self) -> f64 {
        0.0
    }

    /// The detector statistic for one realization.
    pub fn statistic(&self, realization: &Realization) -> Result<f64> {
        match (self, realization) {
            (Self::Trace { noise, sigma }, Realization::Data(x)) => {
                let sigma = match noise {
                    NoiseLevel::Known => sigma.unwrap_or(x.sigma()),
                    NoiseLevel::Estimated => estimated_sigma(x)?,
                };
                Ok(trace_detector(x, sigma, 0.0)?.statistic)
            }
            (Self::Energy, Realization::Data(x)) => energy_statistic(x),
            (Self::MpOutlier { margin }, Realization::Data(x)) => {
                let spec = eig_hermitian(&sample_covariance(x)?)?.with_aspect_ratio(x.aspect_ratio());
                let law = MpLaw::new(x.aspect_ratio(), x.sigma() * x.sigma())?;
                Ok(mp_outlier_detector(&spec, &law, *margin)?.statistic)
            }
            (Self::RingInner { margin }, Realization::Product { spectrum, factors }) => {
                let c = spectrum
                    .c
                    .ok_or_else(|| Error::InvalidParameter("ring detector needs a data-matrix product".into()))?;
                Ok(ring_inner_detector(spectrum, &RingLaw::new(c, *factors)?, *margin)?.statistic)
            }
            (detector, _) => Err(Error::InvalidParameter(format!(
                "detector {} does not apply to this ensemble",
                detector.name()
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Trace { .. } => "trace",
            Self::Energy => "energy",
            Self::MpOutlier { .. } => "mp-outlier",
            Self::RingInner { .. } => "ring-inner",
        }
    }
}

fn estimated_sigma(x: &DataMatrix) -> Result<f64> {
    let spec = eig_hermitian(&sample_covariance(x)?)?;
    Ok(estimate_noise_variance(&spec, x.aspect_ratio())?.sqrt())
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
}

/// Detector statistics for `trials` realizations; trial `t` uses
/// `derive_seed(seed, t, stream)`. The result does not depend on `workers`
/// (0 means one per core).
pub fn detector_statistics(
    detector: &DetectorSpec,
    ensemble: &EnsembleSpec,
    trials: usize,
    seed: u64,
    stream: Stream,
    workers: usize,
) -> Result<Vec<f64>> {
    detector.validate()?;
    ensemble.validate()?;
    pool(workers)?.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| detector.statistic(&ensemble.realize(derive_seed(seed, t as u64, stream))?))
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration {
    pub threshold: f64,
    /// Every H0 statistic was identical.
    pub degenerate: bool,
}

/// The empirical `1 − pfa` quantile: with `k = ⌊pfa·T⌋`, the threshold is
/// the `(k+1)`-th largest statistic, so at most `k` of them exceed it.
pub fn threshold_from_statistics(stats: &[f64], pfa: f64) -> Result<Calibration> {
    if !(pfa > 0.0 && pfa < 1.0) {
        return Err(Error::InvalidParameter(format!("target pfa {pfa} must lie in (0, 1)")));
    }
    if stats.is_empty() {
        return Err(Error::InvalidParameter("no statistics to calibrate on".into()));
    }
    if stats.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("detector statistic"));
    }
    let mut sorted = stats.to_vec();
    sorted.sort_by(f64::total_cmp);
    let t = sorted.len();
    let k = ((pfa * t as f64).floor() as usize).min(t - 1);
    Ok(Calibration { threshold: sorted[t - k - 1], degenerate: sorted[0] == sorted[t - 1] })
}

fn check_trials(trials: usize) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!("need at least {MIN_TRIALS} trials, got {trials}")));
    }
    Ok(())
}

/// Threshold achieving `target_pfa` on `trials` H0 realizations drawn from
/// the calibration stream.
pub fn calibrate_threshold(
    detector: &DetectorSpec,
    h0: &EnsembleSpec,
    target_pfa: f64,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<Calibration> {
    check_trials(trials)?;
    if !(target_pfa > 0.0 && target_pfa < 1.0) {
        return Err(Error::InvalidParameter(format!("target pfa {target_pfa} must lie in (0, 1)")));
    }
    let stats = detector_statistics(detector, h0, trials, seed, Stream::Calibration, workers)?;
    threshold_from_statistics(&stats, target_pfa)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    /// `(pfa, pd)` with both coordinates nondecreasing.
    pub points: Vec<(f64, f64)>,
    pub trials_h0: usize,
    pub trials_h1: usize,
    pub seed: u64,
}

impl RocCurve {
    /// Trapezoidal area under the curve.
    pub fn auc(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0).sum()
    }

    /// Detection probability at `pfa`, interpolating linearly between
    /// operating points.
    pub fn pd_at(&self, pfa: f64) -> f64 {
        let i = self.points.partition_point(|p| p.0 <= pfa);
        if i == 0 {
            return self.points.first().map_or(0.0, |p| p.1);
        }
        let (x0, y0) = self.points[i - 1];
        match self.points.get(i) {
            Some(&(x1, y1)) if x1 > x0 => y0 + (y1 - y0) * (pfa - x0) / (x1 - x0),
            _ => y0,
        }
    }
}

fn exceed(sorted: &[f64], threshold: f64) -> f64 {
    (sorted.len() - sorted.partition_point(|s| *s <= threshold)) as f64 / sorted.len() as f64
}

/// ROC from pooled statistics: one operating point per distinct H0
/// statistic, from the largest down, closed at `(1, 1)`.
pub fn roc_from_statistics(h0: &[f64], h1: &[f64], seed: u64) -> Result<RocCurve> {
    if h0.is_empty() || h1.is_empty() {
        return Err(Error::InvalidParameter("ROC needs statistics under both hypotheses".into()));
    }
    if h0.iter().chain(h1).any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("detector statistic"));
    }
    let mut s0 = h0.to_vec();
    let mut s1 = h1.to_vec();
    s0.sort_by(f64::total_cmp);
    s1.sort_by(f64::total_cmp);
    let mut thresholds = s0.clone();
    thresholds.dedup();
    let points = thresholds
        .iter()
        .rev()
        .map(|&t| (exceed(&s0, t), exceed(&s1, t)))
        .chain(std::iter::once((1.0, 1.0)))
        .collect();
    Ok(RocCurve { points, trials_h0: h0.len(), trials_h1: h1.len(), seed })
}

/// ROC of `detector` from `trials` realizations of each hypothesis, drawn
/// from the H0 and H1 streams of `seed`.
pub fn monte_carlo_roc(
    detector: &DetectorSpec,
    h0: &EnsembleSpec,
    h1: &EnsembleSpec,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<RocCurve> {
    check_trials(trials)?;
    let s0 = detector_statistics(detector, h0, trials, seed, Stream::HypothesisH0, workers)?;
    let s1 = detector_statistics(detector, h1, trials, seed, Stream::HypothesisH1, workers)?;
    roc_from_statistics(&s0, &s1, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{Field, SignalSpec};
    use proptest::prelude::*;

    #[test]
    fn constant_statistics_are_degenerate() {
        let c = threshold_from_statistics(&[0.0; 200], 0.1).unwrap();
        assert_eq!(c, Calibration { threshold: 0.0, degenerate: true });
    }

    #[test]
    fn threshold_counts() {
        let stats: Vec<f64> = (0..100).map(f64::from).collect();
        let c = threshold_from_statistics(&stats, 0.1).unwrap();
        assert_eq!(c.threshold, 89.0);
        assert_eq!(stats.iter().filter(|s| **s > c.threshold).count(), 10);
        assert!(threshold_from_statistics(&stats, 0.0).is_err());
        assert!(threshold_from_statistics(&stats, 1.0).is_err());
    }

    #[test]
    fn too_few_trials_rejected() {
        let h0 = EnsembleSpec::noise(4, 4, 1.0, Field::Real);
        assert!(calibrate_threshold(&DetectorSpec::trace(), &h0, 0.1, 99, 0, 1).is_err());
    }

    #[test]
    fn perfect_separation() {
        let roc = roc_from_statistics(&[0.0, 1.0, 2.0], &[5.0, 6.0], 0).unwrap();
        assert_eq!(roc.points.first(), Some(&(0.0, 1.0)));
        assert_eq!(roc.auc(), 1.0);
        assert_eq!(roc.pd_at(0.1), 1.0);
    }

    #[test]
    fn pd_interpolates() {
        let roc = RocCurve { points: vec![(0.0, 0.0), (0.5, 0.8), (1.0, 1.0)], trials_h0: 2, trials_h1: 2, seed: 0 };
        assert!((roc.pd_at(0.25) - 0.4).abs() < 1e-15);
        assert!((roc.auc() - 0.65).abs() < 1e-15);
    }

    #[test]
    fn mismatched_detector_rejected() {
        let ring = DetectorSpec::RingInner { margin: 0.1 };
        let r = EnsembleSpec::noise(3, 3, 1.0, Field::Real).realize(0).unwrap();
        assert!(ring.statistic(&r).is_err());
    }

    #[test]
    fn statistics_independent_of_workers() {
        let h1 = EnsembleSpec::signal_plus_noise(8, 12, 1.0, Field::Complex, SignalSpec::rank_one(0.5));
        let one = detector_statistics(&DetectorSpec::trace(), &h1, 40, 9, Stream::HypothesisH1, 1).unwrap();
        let four = detector_statistics(&DetectorSpec::trace(), &h1, 40, 9, Stream::HypothesisH1, 4).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn detector_schema() {
        let d: DetectorSpec = serde_json::from_str(r#"{"kind":"trace"}"#).unwrap();
        assert_eq!(d, DetectorSpec::trace());
        let d: DetectorSpec = serde_json::from_str(r#"{"kind":"mp-outlier"}"#).unwrap();
        assert_eq!(d, DetectorSpec::MpOutlier { margin: 0.05 });
        assert!(serde_json::from_str::<DetectorSpec>(r#"{"kind":"trace","gain":2}"#).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn roc_is_monotone(h0 in prop::collection::vec(-5f64..5.0, 1..60), h1 in prop::collection::vec(-5f64..5.0, 1..60)) {
            let roc = roc_from_statistics(&h0, &h1, 0).unwrap();
            prop_assert_eq!(roc.points.first().unwrap().0, 0.0);
            prop_assert_eq!(*roc.points.last().unwrap(), (1.0, 1.0));
            for w in roc.points.windows(2) {
                prop_assert!(w[0].0 <= w[1].0 && w[0].1 <= w[1].1);
            }
            let auc = roc.auc();
            prop_assert!((0.0..=1.0).contains(&auc));
        }
    }
}
