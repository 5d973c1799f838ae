use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rmtlab::cli::{self, Command, ExperimentConfig, FblParams, Manifest, Overrides, Plot};
use rmtlab::detection::{DetectorSpec, NoiseLevel};
use rmtlab::ensembles::{EnsembleSpec, Field, SignalDirection, SignalSpec};
use rmtlab::spectra::Bins;
use rmtlab::Error;

#[derive(Parser)]
#[command(name = "rmtlab", version, about = "Random-matrix spectrum sensing experiments")]
struct Cli {
    /// Worker threads for Monte Carlo trials (0 = one per core). Outputs do
    /// not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; defaults to $RMTLAB_OUT, then ./rmtlab-out.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    no_plot: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum EnsembleArg {
    Noise,
    SignalPlusNoise,
    RingProduct,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Canonical,
    Fourier,
}

#[derive(Args)]
struct DataArgs {
    #[arg(long, value_enum, default_value = "noise")]
    ensemble: EnsembleArg,
    /// Sensors (rows).
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Samples (columns).
    #[arg(long = "N", default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, value_enum, default_value = "complex")]
    field: FieldArg,
    /// Signal powers p_1,...,p_k.
    #[arg(long, value_delimiter = ',')]
    power: Vec<f64>,
    #[arg(long, value_enum, default_value = "canonical")]
    direction: DirectionArg,
    /// Factors of a ring-product ensemble.
    #[arg(long, default_value_t = 1)]
    factors: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetectorArg {
    Trace,
    Energy,
    MpOutlier,
    RingInner,
}

#[derive(Args)]
struct DetectorArgs {
    #[arg(long, value_enum, default_value = "trace")]
    detector: DetectorArg,
    /// Trace detector: use the known sigma or a median-eigenvalue estimate.
    #[arg(long, default_value = "known")]
    noise: String,
    #[arg(long, default_value_t = 0.05)]
    margin: f64,
    #[arg(long)]
    target_pfa: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Eigenvalue histogram of a sample covariance against the MP law.
    Esd {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "auto")]
        bins: Bins,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenvalues of a standardized product against the ring law.
    Ringlaw {
        #[arg(long = "L", default_value_t = 1)]
        factors: usize,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, value_delimiter = ',')]
        power: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenvalues of a product of Ginibre matrices.
    GinibreProduct {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Point cloud, Green's-function kernel and its eigenvalue cloud.
    Erm {
        #[arg(long, default_value_t = 500)]
        points: usize,
        /// Dimensionless density rho * lambda0^3.
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda0: f64,
        /// Wavenumber override; 0 gives the static kernel.
        #[arg(long)]
        k0: Option<f64>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// One detector verdict, optionally with a calibrated threshold.
    Detect {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        detector: DetectorArgs,
        /// Calibration trials when --target-pfa is given.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo ROC of a detector; H0 is the ensemble without signal.
    Roc {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        detector: DetectorArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Normal-approximation rate table.
    Fbl {
        #[arg(long)]
        snr: Option<f64>,
        #[arg(long)]
        capacity: Option<f64>,
        #[arg(long)]
        dispersion: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        #[arg(long, default_value_t = 100)]
        n_min: u64,
        #[arg(long, default_value_t = 1_000_000)]
        n_max: u64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        #[arg(long)]
        target_rate: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Fast deterministic oracle checks.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
    /// Run a JSON config, or replay a manifest.
    Run {
        #[arg(required_unless_present = "manifest", conflicts_with = "manifest")]
        config: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: Option<String>,
    },
}

fn field(f: FieldArg) -> Field {
    match f {
        FieldArg::Real => Field::Real,
        FieldArg::Complex => Field::Complex,
    }
}

fn signal(powers: &[f64], direction: DirectionArg) -> SignalSpec {
    let direction = match direction {
        DirectionArg::Canonical => SignalDirection::Canonical,
        DirectionArg::Fourier => SignalDirection::Fourier,
    };
    SignalSpec { powers: powers.to_vec(), direction, mean_vector: None }
}

fn data_ensemble(d: &DataArgs) -> Result<EnsembleSpec, Error> {
    let (n, samples, sigma, field) = (d.n, d.samples, d.sigma, field(d.field));
    let sig = (!d.power.is_empty()).then(|| signal(&d.power, d.direction));
    Ok(match (d.ensemble, sig) {
        (EnsembleArg::Noise, None) => EnsembleSpec::Noise { n, samples, sigma, field },
        (EnsembleArg::Noise, Some(_)) => {
            return Err(Error::Config("--power needs --ensemble signal-plus-noise or ring-product".into()))
        }
        (EnsembleArg::SignalPlusNoise, Some(signal)) => EnsembleSpec::SignalPlusNoise { n, samples, sigma, field, signal },
        (EnsembleArg::SignalPlusNoise, None) => {
            return Err(Error::Config("signal-plus-noise needs --power".into()))
        }
        (EnsembleArg::RingProduct, signal) => {
            EnsembleSpec::RingProduct { factors: d.factors, n, samples, sigma, field, signal }
        }
    })
}

fn detector(d: &DetectorArgs) -> Result<DetectorSpec, Error> {
    Ok(match d.detector {
        DetectorArg::Trace => {
            let noise = match d.noise.as_str() {
                "known" => NoiseLevel::Known,
                "estimated" => NoiseLevel::Estimated,
                other => return Err(Error::Config(format!("--noise must be known or estimated, got {other:?}"))),
            };
            DetectorSpec::Trace { noise, sigma: None }
        }
        DetectorArg::Energy => DetectorSpec::Energy,
        DetectorArg::MpOutlier => DetectorSpec::MpOutlier { margin: d.margin },
        DetectorArg::RingInner => DetectorSpec::RingInner { margin: d.margin },
    })
}

fn base(command: Command, trials: usize, common: &Common) -> ExperimentConfig {
    ExperimentConfig {
        trials,
        master_seed: common.seed,
        output_dir: common.out.clone(),
        plot: if common.no_plot { Plot::Off } else { Plot::On },
        ..ExperimentConfig::new(command)
    }
}

fn build(cmd: Cmd) -> Result<ExperimentConfig, Error> {
    Ok(match cmd {
        Cmd::Esd { data, bins, trials, common } => ExperimentConfig {
            ensemble: Some(data_ensemble(&data)?),
            bins,
            ..base(Command::Esd, trials, &common)
        },
        Cmd::Ringlaw { factors, c, n, sigma, power, trials, common } => {
            if !(c > 0.0 && c < 1.0) {
                return Err(Error::Config(format!("--c must lie in (0, 1), got {c}")));
            }
            let samples = (n as f64 / c).round() as usize;
            let signal = (!power.is_empty()).then(|| signal(&power, DirectionArg::Canonical));
            ExperimentConfig {
                ensemble: Some(EnsembleSpec::RingProduct { factors, n, samples, sigma, field: Field::Complex, signal }),
                ..base(Command::Ringlaw, trials, &common)
            }
        }
        Cmd::GinibreProduct { k, n, trials, common } => ExperimentConfig {
            ensemble: Some(EnsembleSpec::GinibreProduct { k, n }),
            ..base(Command::GinibreProduct, trials, &common)
        },
        Cmd::Erm { points, density, lambda0, k0, trials, common } => ExperimentConfig {
            ensemble: Some(EnsembleSpec::Erm { points, rho: density / lambda0.powi(3), lambda0, wavenumber: k0 }),
            ..base(Command::Erm, trials, &common)
        },
        Cmd::Detect { data, detector: d, trials, common } => ExperimentConfig {
            ensemble: Some(data_ensemble(&data)?),
            detector: Some(detector(&d)?),
            target_pfa: d.target_pfa,
            ..base(Command::Detect, trials, &common)
        },
        Cmd::Roc { data, detector: d, trials, common } => ExperimentConfig {
            ensemble: Some(data_ensemble(&data)?),
            detector: Some(detector(&d)?),
            target_pfa: d.target_pfa,
            ..base(Command::Roc, trials, &common)
        },
        Cmd::Fbl { snr, capacity, dispersion, epsilon, n_min, n_max, points, target_rate, common } => ExperimentConfig {
            fbl: Some(FblParams { capacity, dispersion, snr, epsilon, n_min, n_max, points, target_rate }),
            ..base(Command::Fbl, 1, &common)
        },
        Cmd::Selftest { common } => base(Command::Selftest, 1, &common),
        Cmd::Run { config, manifest, seed, trials, out, plot } => {
            let plot = match plot.as_deref() {
                None => None,
                Some("on") => Some(Plot::On),
                Some("off") => Some(Plot::Off),
                Some(other) => return Err(Error::Config(format!("--plot must be on or off, got {other:?}"))),
            };
            let loaded = match (config, manifest) {
                (_, Some(m)) => Manifest::from_file(&m)?.config,
                (Some(c), None) => ExperimentConfig::from_file(&c)?,
                (None, None) => unreachable!("clap requires one"),
            };
            loaded.apply(&Overrides { master_seed: seed, trials, output_dir: out, plot })
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            return fail(&Error::Config(first));
        }
    };
    let result = build(cli.command).and_then(|config| cli::run(&config, cli.workers));
    match result {
        Ok(report) if report.failed_checks.is_empty() => {
            println!("wrote {} files to {}", report.files.len(), report.output_dir.display());
            ExitCode::SUCCESS
        }
        Ok(report) => fail(&Error::SelftestFailed(report.failed_checks.join(","))),
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("{}", cli::error_line(e));
    ExitCode::from(cli::exit_code(e) as u8)
}
