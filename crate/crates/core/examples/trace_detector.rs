//! The normalised trace of the hollow Wishart matrix concentrates at zero
//! under noise, with variance shrinking like 1/(nN).

use rmtlab::detection::{detector_statistics, DetectorSpec};
use rmtlab::ensembles::{EnsembleSpec, Field, SignalSpec};
use rmtlab::seed::Stream;

fn moments(v: &[f64]) -> (f64, f64) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    (m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64)
}

fn main() -> rmtlab::Result<()> {
    let trials = 400;
    for n in [50, 100, 200, 400] {
        let noise = EnsembleSpec::noise(n, n, 1.0, Field::Real);
        let signal = EnsembleSpec::signal_plus_noise(n, n, 1.0, Field::Real, SignalSpec::rank_one(1.0));
        let z0 = detector_statistics(&DetectorSpec::trace(), &noise, trials, 1, Stream::HypothesisH0, 0)?;
        let z1 = detector_statistics(&DetectorSpec::trace(), &signal, trials, 1, Stream::HypothesisH1, 0)?;
        let (m0, v0) = moments(&z0);
        let (m1, _) = moments(&z1);
        let pd = z1.iter().filter(|z| **z > 0.0).count() as f64 / trials as f64;
        println!(
            "n = N = {n:3}: H0 mean {m0:+.2e}, var {v0:.2e} (2/n² = {:.2e}); H1 mean {m1:+.2e}, P(Z > 0) {pd:.3}",
            2.0 / (n * n) as f64
        );
    }
    Ok(())
}
