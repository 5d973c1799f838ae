//! Hypothesis tests for signal presence and the Monte Carlo ROC harness.

mod harness;
mod lrt;
mod statistics;

pub use harness::{
    calibrate_threshold, detector_statistics, monte_carlo_roc, roc_from_statistics,
    threshold_from_statistics, Calibration, DetectorSpec, NoiseLevel, RocCurve, MIN_TRIALS,
};
pub use lrt::{deflection, lrt_statistic, LrtModel};
pub use statistics::{
    energy_statistic, estimate_noise_variance, mp_outlier_detector, ring_inner_detector,
    trace_detector,
};

use crate::ensembles::Hypothesis;

/// A statistic, the threshold it was compared against, and the verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorResult {
    pub statistic: f64,
    pub threshold: f64,
    pub verdict: Hypothesis,
}

impl DetectorResult {
    /// H1 iff `statistic > threshold`; ties go to H0.
    pub fn decide(statistic: f64, threshold: f64) -> Self {
        let verdict = if statistic > threshold { Hypothesis::H1 } else { Hypothesis::H0 };
        Self { statistic, threshold, verdict }
    }
}
