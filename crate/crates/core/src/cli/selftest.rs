//! A fast, deterministic run of the oracle checks.

use faer::Mat;
use serde::Serialize;
use serde_json::json;

use super::run::{json_bytes, Artifacts};
use crate::detection::{
    calibrate_threshold, detector_statistics, lrt_statistic, monte_carlo_roc, DetectorSpec, LrtModel,
};
use crate::ensembles::{
    build_erm, build_erm_with_wavenumber, sample_covariance, sample_point_cloud, EnsembleSpec, Field,
    Realization, SignalSpec,
};
use crate::fbl::{normal_approx_rate, q_inverse, FblChannel};
use crate::io;
use crate::seed::{derive_seed, Stream};
use crate::spectra::{
    eig_general, eig_hermitian, ginibre_product_radial_cdf, ginibre_product_spectrum, ks_statistic, mp_cdf,
    mp_support, ring_law_radii, MpLaw, RingLaw,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub value: f64,
    /// Human-readable acceptance rule, e.g. `<= 0.05`.
    pub rule: String,
    pub pass: bool,
}

fn at_most(name: &'static str, value: f64, bound: f64) -> SelftestCheck {
    SelftestCheck { name, value, rule: format!("<= {bound}"), pass: value <= bound }
}

fn at_least(name: &'static str, value: f64, bound: f64) -> SelftestCheck {
    SelftestCheck { name, value, rule: format!(">= {bound}"), pass: value >= bound }
}

fn within(name: &'static str, value: f64, lo: f64, hi: f64) -> SelftestCheck {
    SelftestCheck { name, value, rule: format!("in [{lo}, {hi}]"), pass: (lo..=hi).contains(&value) }
}

fn data(e: &EnsembleSpec, seed: u64) -> Result<crate::ensembles::DataMatrix> {
    match e.realize(seed)? {
        Realization::Data(x) => Ok(x),
        _ => unreachable!("data ensemble"),
    }
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (mean, v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0))
}

/// Runs every check and returns the checks plus the artifacts
/// (`selftest.csv`, `selftest_roc.csv`, `summary.json`).
pub fn selftest_artifacts(seed: u64, workers: usize) -> Result<(Artifacts, Vec<SelftestCheck>)> {
    let mut checks = Vec::new();
    let s = |t: u64, stream| derive_seed(seed, t, stream);

    // Marchenko–Pastur fit
    let noise = EnsembleSpec::noise(400, 400, 1.0, Field::Complex);
    let law = MpLaw::new(1.0, 1.0)?;
    let spec = eig_hermitian(&sample_covariance(&data(&noise, s(0, Stream::Noise))?)?)?;
    let values = spec.real_parts();
    checks.push(at_most("mp_ks", ks_statistic(&values, |x| mp_cdf(x, &law).unwrap_or(f64::NAN)), 0.05));

    // detached spike
    let (_, b) = mp_support(&law);
    let edge = 1.05 * b;
    let spiked = EnsembleSpec::signal_plus_noise(400, 400, 1.0, Field::Complex, SignalSpec::rank_one(10.0));
    let top = eig_hermitian(&sample_covariance(&data(&spiked, s(1, Stream::Noise))?)?)?;
    checks.push(at_least("spike_detached", top.eigenvalues.iter().filter(|z| z.re > edge).count() as f64, 1.0));
    checks.push(at_most("noise_detached", values.iter().filter(|v| **v > edge).count() as f64, 0.0));

    // trace statistic moments, real case
    let (n, big_n) = (40usize, 40usize);
    let real = EnsembleSpec::noise(n, big_n, 1.0, Field::Real);
    let z = detector_statistics(&DetectorSpec::trace(), &real, 400, seed, Stream::Noise, workers)?;
    let (mean, var) = mean_var(&z);
    checks.push(at_most("trace_mean_se", mean.abs() / (var / z.len() as f64).sqrt(), 4.0));
    let predicted = 2.0 / (n * big_n) as f64;
    checks.push(within("trace_var_ratio", var / predicted, 0.5, 2.0));

    // calibration on a fresh seed
    let small = EnsembleSpec::noise(20, 20, 1.0, Field::Complex);
    let cal = calibrate_threshold(&DetectorSpec::trace(), &small, 0.1, 2000, seed, workers)?;
    let fresh = detector_statistics(&DetectorSpec::trace(), &small, 2000, seed, Stream::HypothesisH0, workers)?;
    let pfa = fresh.iter().filter(|v| **v > cal.threshold).count() as f64 / fresh.len() as f64;
    checks.push(within("calibrated_pfa", pfa, 0.07, 0.13));

    // ring law annulus
    let ring = EnsembleSpec::RingProduct { factors: 1, n: 200, samples: 400, sigma: 1.0, field: Field::Complex, signal: None };
    if let Realization::Product { spectrum, factors } = ring.realize(s(2, Stream::Noise))? {
        let (inner, outer) = ring_law_radii(&RingLaw::new(0.5, factors)?)?;
        let radii = spectrum.sorted_moduli();
        let inside = radii.iter().filter(|r| **r >= inner - 0.1 && **r <= outer + 0.1).count();
        checks.push(at_least("ring_annulus_fraction", inside as f64 / radii.len() as f64, 0.95));
    }

    // Ginibre product radial law
    let radii = ginibre_product_spectrum(2, 300, s(3, Stream::Ginibre))?.sorted_moduli();
    checks.push(at_most("ginibre_product_ks", ks_statistic(&radii, |r| ginibre_product_radial_cdf(r, 2)), 0.06));

    // ERM structure and the static-kernel limit
    let cloud = sample_point_cloud(150, 1.0, 1.0, s(4, Stream::PointCloud))?;
    let a = build_erm(&cloud)?;
    let m = a.entries();
    let mut defect = 0.0f64;
    for i in 0..a.n() {
        defect = defect.max(m[(i, i)].norm());
        for j in 0..i {
            defect = defect.max((m[(i, j)] - m[(j, i)]).norm());
        }
    }
    checks.push(at_most("erm_symmetry_defect", defect, 0.0));
    let stat = eig_general(&build_erm_with_wavenumber(&cloud, 0.0)?)?;
    checks.push(at_most("erm_static_imag_ratio", stat.max_abs_imag() / stat.spectral_radius(), 1e-9));

    // finite blocklength
    let ch = FblChannel::new(0.5, 1.0)?;
    let at_half = (2..=6).map(|k| normal_approx_rate(&ch, 0.5, 10u64.pow(k))).collect::<Result<Vec<_>>>()?;
    checks.push(at_most("fbl_half_error", at_half.iter().map(|r| (r - ch.capacity).abs()).fold(0.0, f64::max), 0.0));
    let scaled = (2..=6)
        .map(|k| {
            let n = 10u64.pow(k);
            Ok(n as f64 * (ch.capacity - normal_approx_rate(&ch, 1e-3, n)?).powi(2))
        })
        .collect::<Result<Vec<_>>>()?;
    let spread = scaled.iter().fold(0.0f64, |acc, v| acc.max((v - scaled[0]).abs()));
    checks.push(at_most("fbl_dispersion_spread", spread, 1e-9));
    checks.push(at_most("q_inverse_error", (q_inverse(0.1)? - 1.28155).abs(), 1e-4));

    // LRT by hand: R = diag(1, 4), m = (1, 1), y = (2, 2)
    let model = LrtModel::new(vec![1.0, 1.0], Mat::from_fn(2, 2, |i, j| if i != j { 0.0 } else if i == 0 { 1.0 } else { 4.0 }))?;
    checks.push(at_most("lrt_hand_error", (lrt_statistic(&[2.0, 2.0], &model)? - 2.5).abs(), 1e-12));

    // ROC harness
    let strong = EnsembleSpec::signal_plus_noise(10, 10, 1.0, Field::Complex, SignalSpec::rank_one(50.0));
    let saturated = monte_carlo_roc(&DetectorSpec::trace(), &strong.h0(), &strong, 200, seed, workers)?;
    checks.push(at_least("roc_saturated_auc", saturated.auc(), 1.0));
    let weak = EnsembleSpec::signal_plus_noise(50, 50, 1.0, Field::Complex, SignalSpec::rank_one(0.5));
    let curve = monte_carlo_roc(&DetectorSpec::trace(), &weak.h0(), &weak, 200, seed, workers)?;
    checks.push(at_least("roc_weak_auc", curve.auc(), 0.5));

    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| vec![c.name.to_string(), c.value.to_string(), c.rule.clone(), c.pass.to_string()])
        .collect();
    let summary = json!({
        "command": "selftest",
        "checks": checks.len(),
        "failed": checks.iter().filter(|c| !c.pass).map(|c| c.name).collect::<Vec<_>>(),
    });
    let mut out = Artifacts::new();
    out.insert("selftest.csv".into(), io::table_csv(&["check", "value", "rule", "pass"], &rows));
    out.insert("selftest_roc.csv".into(), io::roc_csv(&curve));
    out.insert("summary.json".into(), json_bytes(&summary));
    Ok((out, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes_and_is_reproducible() {
        let (a, checks) = selftest_artifacts(0, 1).unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
        assert!(failed.is_empty(), "{failed:?}");
        let (b, _) = selftest_artifacts(0, 2).unwrap();
        assert_eq!(a, b);
    }
}
