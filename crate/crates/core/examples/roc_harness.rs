//! Monte Carlo ROC of the trace detector against the energy baseline with
//! an estimated noise level, plus the MP outlier detector.

use rmtlab::detection::{monte_carlo_roc, DetectorSpec, NoiseLevel};
use rmtlab::ensembles::{EnsembleSpec, Field, SignalSpec};

fn main() -> rmtlab::Result<()> {
    let trials = 400;
    let h1 = EnsembleSpec::signal_plus_noise(100, 100, 1.0, Field::Complex, SignalSpec::rank_one(2.0));
    let h0 = h1.h0();
    let detectors = [
        DetectorSpec::trace(),
        DetectorSpec::Trace { noise: NoiseLevel::Estimated, sigma: None },
        DetectorSpec::Energy,
        DetectorSpec::MpOutlier { margin: 0.0 },
    ];
    for d in &detectors {
        let roc = monte_carlo_roc(d, &h0, &h1, trials, 17, 0)?;
        println!(
            "{:10} {:9}: AUC {:.3}, P_d at P_fa = 0.1: {:.3}",
            d.name(),
            match d {
                DetectorSpec::Trace { noise: NoiseLevel::Estimated, .. } => "(σ̂)",
                _ => "",
            },
            roc.auc(),
            roc.pd_at(0.1)
        );
    }
    Ok(())
}
