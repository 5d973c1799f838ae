use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use faer::c64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{Command, ExperimentConfig, Plot};
use super::selftest::selftest_artifacts;
use crate::detection::{calibrate_threshold, monte_carlo_roc, DetectorResult};
use crate::ensembles::{build_erm, build_erm_with_wavenumber, sample_covariance, sample_point_cloud, EnsembleSpec, Realization};
use crate::fbl::{blocklength_for_rate, q_inverse, rate_table};
use crate::io::{self, SvgPlot};
use crate::seed::{derive_seed, Stream};
use crate::spectra::{
    eig_general, eig_hermitian, esd_histogram, ginibre_product_radial_cdf, ks_statistic, mp_bin_average, mp_cdf,
    mp_density, mp_support, quantile, ring_law_radial_cdf, ring_law_radii, MpLaw, RingLaw, Spectrum, SpectrumKind,
};
use crate::{Error, Result};

pub const TOOL_NAME: &str = "rmtlab";

/// File name to contents, in name order.
pub type Artifacts = BTreeMap<String, Vec<u8>>;

/// Everything needed to reproduce a run. The output directory is left out
/// so a replay can target any location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub master_seed: u64,
    pub config: ExperimentConfig,
    pub artifacts: Vec<String>,
}

impl Manifest {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("manifest: {e}")))
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    /// Names of failed selftest checks; empty for other commands.
    pub failed_checks: Vec<String>,
}

/// Validates, computes every artifact, then writes them all.
pub fn run(config: &ExperimentConfig, workers: usize) -> Result<RunReport> {
    let (artifacts, failed_checks) = execute_with_checks(config, workers)?;
    let dir = config.resolved_output_dir();
    let mut files = Vec::with_capacity(artifacts.len());
    for (name, bytes) in &artifacts {
        let path = dir.join(name);
        io::write_file(&path, bytes)?;
        files.push(path);
    }
    Ok(RunReport { output_dir: dir, files, failed_checks })
}

/// The artifacts of a run, including `manifest.json`, without touching
/// the filesystem.
pub fn execute(config: &ExperimentConfig, workers: usize) -> Result<Artifacts> {
    Ok(execute_with_checks(config, workers)?.0)
}

fn execute_with_checks(config: &ExperimentConfig, workers: usize) -> Result<(Artifacts, Vec<String>)> {
    config.validate()?;
    let mut failed = Vec::new();
    let mut out = match config.command {
        Command::Esd => esd(config)?,
        Command::Ringlaw => ringlaw(config)?,
        Command::GinibreProduct => ginibre_product(config)?,
        Command::Erm => erm(config)?,
        Command::Detect => detect(config, workers)?,
        Command::Roc => roc(config, workers)?,
        Command::Fbl => fbl(config)?,
        Command::Selftest => {
            let (artifacts, checks) = selftest_artifacts(config.master_seed, workers)?;
            failed = checks.into_iter().filter(|c| !c.pass).map(|c| c.name.to_string()).collect();
            artifacts
        }
    };
    if config.plot == Plot::Off {
        out.retain(|name, _| !name.ends_with(".svg"));
    }
    let manifest = Manifest {
        tool: TOOL_NAME.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        master_seed: config.master_seed,
        config: ExperimentConfig { output_dir: None, ..config.clone() },
        artifacts: out.keys().cloned().chain(std::iter::once("manifest.json".into())).collect(),
    };
    out.insert("manifest.json".into(), json_bytes(&manifest));
    Ok((out, failed))
}

pub(super) fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("serializable");
    v.push(b'\n');
    v
}

fn ensemble(config: &ExperimentConfig) -> &EnsembleSpec {
    config.ensemble.as_ref().expect("validated")
}

/// Seed of realization `t`; the stream follows the ensemble's main ingredient.
fn trial_seed(e: &EnsembleSpec, master: u64, t: usize) -> u64 {
    let stream = match e {
        EnsembleSpec::Ginibre { .. } | EnsembleSpec::GinibreProduct { .. } => Stream::Ginibre,
        EnsembleSpec::Erm { .. } => Stream::PointCloud,
        _ => Stream::Noise,
    };
    derive_seed(master, t as u64, stream)
}

/// Pools the eigenvalues of `trials` realizations.
fn pooled(config: &ExperimentConfig, mut spectrum_of: impl FnMut(Realization) -> Result<Spectrum>) -> Result<Spectrum> {
    let e = ensemble(config);
    let mut all: Option<Spectrum> = None;
    for t in 0..config.trials {
        let s = spectrum_of(e.realize(trial_seed(e, config.master_seed, t))?)?;
        match &mut all {
            None => all = Some(s),
            Some(acc) => acc.eigenvalues.extend(s.eigenvalues),
        }
    }
    Ok(all.expect("trials >= 1"))
}

fn points(spec: &Spectrum) -> Vec<(f64, f64)> {
    spec.eigenvalues.iter().map(|z| (z.re, z.im)).collect()
}

fn esd(config: &ExperimentConfig) -> Result<Artifacts> {
    let (sigma, c) = match ensemble(config) {
        EnsembleSpec::Noise { sigma, n, samples, .. } | EnsembleSpec::SignalPlusNoise { sigma, n, samples, .. } => {
            (*sigma, *n as f64 / *samples as f64)
        }
        _ => unreachable!("validated"),
    };
    let spec = pooled(config, |r| match r {
        Realization::Data(x) => Ok(eig_hermitian(&sample_covariance(&x)?)?.with_aspect_ratio(c)),
        _ => unreachable!("validated"),
    })?;
    let hist = esd_histogram(&spec, config.bins)?;
    let mut out = Artifacts::new();
    out.insert("esd_histogram.csv".into(), io::histogram_csv(&hist));
    out.insert("eigenvalues.csv".into(), io::scatter_csv(&spec.eigenvalues));

    let mut summary = json!({
        "command": "esd",
        "eigenvalues": spec.len(),
        "aspect_ratio": c,
        "bins": hist.bins(),
        "min": spec.eigenvalues.first().map(|z| z.re),
        "max": spec.eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max),
    });
    let mut svg = SvgPlot::new("Empirical spectral density", "eigenvalue", "density")
        .bars(hist.rows().collect(), "#9ab");
    if sigma > 0.0 {
        let law = MpLaw::new(c, sigma * sigma)?;
        let (a, b) = mp_support(&law);
        let mut values = spec.real_parts();
        values.sort_by(f64::total_cmp);
        let ks = ks_statistic(&values, |x| mp_cdf(x, &law).unwrap_or(f64::NAN));
        let sup = hist.sup_deviation(|lo, hi| mp_bin_average(lo, hi, &law))?;
        let above = values.iter().filter(|v| **v > 1.05 * b).count();
        summary["mp"] = json!({
            "support": [a, b],
            "ks": ks,
            "sup_density_deviation": sup,
            "above_edge_1.05": above,
        });
        let curve = (0..=400)
            .map(|i| {
                let x = a + (b - a) * i as f64 / 400.0;
                Ok((x, mp_density(x, &law)?))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|(_, y)| y.is_finite())
            .collect();
        svg = svg.line(curve, "#c22");
    }
    out.insert("esd.svg".into(), svg.render().into_bytes());
    out.insert("summary.json".into(), json_bytes(&summary));
    Ok(out)
}

fn ringlaw(config: &ExperimentConfig) -> Result<Artifacts> {
    let mut factors = 1;
    let spec = pooled(config, |r| match r {
        Realization::Product { spectrum, factors: l } => {
            factors = l;
            Ok(spectrum)
        }
        _ => unreachable!("validated"),
    })?;
    let c = ensemble(config).aspect_ratio().expect("ring product");
    let law = RingLaw::new(c, factors)?;
    let (inner, outer) = ring_law_radii(&law)?;
    let radii = spec.sorted_moduli();
    let inside = radii.iter().filter(|r| **r >= inner - 0.1 && **r <= outer + 0.1).count();
    let summary = json!({
        "command": "ringlaw",
        "eigenvalues": radii.len(),
        "aspect_ratio": c,
        "factors": factors,
        "radii": [inner, outer],
        "fraction_in_annulus": inside as f64 / radii.len() as f64,
        "radius_p01": quantile(&radii, 0.01),
        "ks_radial": ks_statistic(&radii, |r| ring_law_radial_cdf(r, &law)),
    });
    let svg = SvgPlot::new("Ring law", "Re", "Im")
        .scatter(points(&spec), "#235")
        .circle(inner, "#c22")
        .circle(outer, "#c22")
        .equal_aspect();
    let mut out = Artifacts::new();
    out.insert("eigenvalues.csv".into(), io::scatter_csv(&spec.eigenvalues));
    out.insert("ringlaw.svg".into(), svg.render().into_bytes());
    out.insert("summary.json".into(), json_bytes(&summary));
    Ok(out)
}

fn ginibre_product(config: &ExperimentConfig) -> Result<Artifacts> {
    let k = match ensemble(config) {
        EnsembleSpec::GinibreProduct { k, .. } => *k,
        _ => 1,
    };
    let spec = pooled(config, |r| match r {
        Realization::Product { spectrum, .. } => Ok(spectrum),
        Realization::Square(a) => eig_general(&a),
        Realization::Data(_) => unreachable!("validated"),
    })?;
    let radii = spec.sorted_moduli();
    let summary = json!({
        "command": "ginibre-product",
        "factors": k,
        "eigenvalues": radii.len(),
        "ks_radial": ks_statistic(&radii, |r| ginibre_product_radial_cdf(r, k)),
        "spectral_radius": spec.spectral_radius(),
    });
    let svg = SvgPlot::new("Ginibre product", "Re", "Im")
        .scatter(points(&spec), "#235")
        .circle(1.0, "#c22")
        .equal_aspect();
    let mut out = Artifacts::new();
    out.insert("eigenvalues.csv".into(), io::scatter_csv(&spec.eigenvalues));
    out.insert("ginibre_product.svg".into(), svg.render().into_bytes());
    out.insert("summary.json".into(), json_bytes(&summary));
    Ok(out)
}

fn erm(config: &ExperimentConfig) -> Result<Artifacts> {
    let e = ensemble(config);
    let EnsembleSpec::Erm { points: count, rho, lambda0, wavenumber } = e else {
        unreachable!("validated")
    };
    let mut all: Vec<c64> = Vec::new();
    let mut positions = Vec::new();
    let (mut asym, mut diag) = (0.0f64, 0.0f64);
    for t in 0..config.trials {
        let cloud = sample_point_cloud(*count, *rho, *lambda0, trial_seed(e, config.master_seed, t))?;
        let a = match wavenumber {
            Some(k) => build_erm_with_wavenumber(&cloud, *k)?,
            None => build_erm(&cloud)?,
        };
        let m = a.entries();
        for i in 0..a.n() {
            diag = diag.max(m[(i, i)].norm());
            for j in 0..i {
                asym = asym.max((m[(i, j)] - m[(j, i)]).norm());
            }
        }
        all.extend(eig_general(&a)?.eigenvalues);
        if t == 0 {
            positions = cloud.positions.clone();
        }
    }
    let spec = Spectrum { eigenvalues: all, n: *count, c: None, kind: SpectrumKind::General };
    let summary = json!({
        "command": "erm",
        "eigenvalues": spec.len(),
        "density_parameter": rho * lambda0.powi(3),
        "max_asymmetry": asym,
        "max_abs_diagonal": diag,
        "spectral_radius": spec.spectral_radius(),
        "max_abs_imag": spec.max_abs_imag(),
    });
    let rows: Vec<Vec<String>> = positions.iter().map(|p| p.iter().map(|v| v.to_string()).collect()).collect();
    let svg = SvgPlot::new("Euclidean random matrix eigenvalues", "Re", "Im").scatter(points(&spec), "#235");
    let mut out = Artifacts::new();
    out.insert("eigenvalues.csv".into(), io::scatter_csv(&spec.eigenvalues));
    out.insert("points.csv".into(), io::table_csv(&["x", "y", "z"], &rows));
    out.insert("erm.svg".into(), svg.render().into_bytes());
    out.insert("summary.json".into(), json_bytes(&summary));
    Ok(out)
}

fn detect(config: &ExperimentConfig, workers: usize) -> Result<Artifacts> {
    let e = ensemble(config);
    let detector = config.detector.as_ref().expect("validated");
    let (threshold, degenerate) = match config.target_pfa {
        Some(pfa) => {
            let cal = calibrate_threshold(detector, &e.h0(), pfa, config.trials, config.master_seed, workers)?;
            (cal.threshold, cal.degenerate)
        }
        None => (detector.default_threshold(), false),
    };
    let realization = e.realize(derive_seed(config.master_seed, 0, Stream::Noise))?;
    let result = DetectorResult::decide(detector.statistic(&realization)?, threshold);
    let verdict = format!("{:?}", result.verdict);
    let row = vec![vec![result.statistic.to_string(), result.threshold.to_string(), verdict.clone()]];
    let summary = json!({
        "command": "detect",
        "detector": detector.name(),
        "statistic": result.statistic,
        "threshold": result.threshold,
        "verdict": verdict,
        "calibrated": config.target_pfa.is_some(),
        "degenerate_calibration": degenerate,
    });
    let mut out = Artifacts::new();
    out.insert("detect.csv".into(), io::table_csv(&["statistic", "threshold", "verdict"], &row));
    out.insert("summary.json".into(), json_bytes(&summary));
    Ok(out)
}

fn roc(config: &ExperimentConfig, workers: usize) -> Result<Artifacts> {
    let e = ensemble(config);
    let detector = config.detector.as_ref().expect("validated");
    let curve = monte_carlo_roc(detector, &e.h0(), e, config.trials, config.master_seed, workers)?;
    let summary = json!({
        "command": "roc",
        "detector": detector.name(),
        "trials": config.trials,
        "auc": curve.auc(),
        "pd_at_target": config.target_pfa.map(|p| curve.pd_at(p)),
    });
    let svg = SvgPlot::new("ROC", "P_fa", "P_d")
        .line(vec![(0.0, 0.0), (1.0, 1.0)], "#bbb")
        .line(curve.points.clone(), "#c22");
    let mut out = Artifacts::new();
    out.insert("roc.csv".into(), io::roc_csv(&curve));
    out.insert("roc.svg".into(), svg.render().into_bytes());
    out.insert("summary.json".into(), json_bytes(&summary));
    Ok(out)
}

fn fbl(config: &ExperimentConfig) -> Result<Artifacts> {
    let p = config.fbl.as_ref().expect("validated");
    let ch = p.channel()?;
    let table = rate_table(&ch, p.epsilon, p.n_min, p.n_max, p.points)?;
    let blocklength = match p.target_rate {
        Some(r) => Some(blocklength_for_rate(&ch, p.epsilon, r)?),
        None => None,
    };
    let summary = json!({
        "command": "fbl",
        "capacity": ch.capacity,
        "dispersion": ch.dispersion,
        "epsilon": p.epsilon,
        "q_inverse": q_inverse(p.epsilon)?,
        "target_rate": p.target_rate,
        "blocklength_for_target": blocklength,
    });
    let (lo, hi) = (table.first().expect("grid").0 as f64, table.last().expect("grid").0 as f64);
    let svg = SvgPlot::new("Normal approximation", "blocklength n", "rate (bits/use)")
        .line(vec![(lo, ch.capacity), (hi, ch.capacity)], "#bbb")
        .line(table.iter().map(|(n, r)| (*n as f64, *r)).collect(), "#c22")
        .log_x();
    let mut out = Artifacts::new();
    out.insert("rate.csv".into(), io::rate_csv(&table));
    out.insert("rate.svg".into(), svg.render().into_bytes());
    out.insert("summary.json".into(), json_bytes(&summary));
    Ok(out)
}
