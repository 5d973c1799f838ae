use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::detection::{DetectorSpec, MIN_TRIALS};
use crate::ensembles::EnsembleSpec;
use crate::fbl::{awgn_channel, FblChannel};
use crate::spectra::Bins;
use crate::{Error, Result};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "RMTLAB_OUT";
/// Output directory when neither a flag, the config nor the environment set one.
pub const DEFAULT_OUTPUT_DIR: &str = "rmtlab-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Esd,
    Ringlaw,
    GinibreProduct,
    Erm,
    Detect,
    Roc,
    Fbl,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Esd => "esd",
            Command::Ringlaw => "ringlaw",
            Command::GinibreProduct => "ginibre-product",
            Command::Erm => "erm",
            Command::Detect => "detect",
            Command::Roc => "roc",
            Command::Fbl => "fbl",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plot {
    #[default]
    On,
    Off,
}

/// Channel and grid for the rate table. Give either `snr` (AWGN) or both
/// `capacity` and `dispersion`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FblParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersion: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr: Option<f64>,
    pub epsilon: f64,
    #[serde(default = "default_n_min")]
    pub n_min: u64,
    #[serde(default = "default_n_max")]
    pub n_max: u64,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Also report the smallest blocklength reaching this rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_rate: Option<f64>,
}

fn default_n_min() -> u64 {
    100
}

fn default_n_max() -> u64 {
    1_000_000
}

fn default_points() -> usize {
    41
}

impl FblParams {
    pub fn channel(&self) -> Result<FblChannel> {
        match (self.snr, self.capacity, self.dispersion) {
            (Some(snr), None, None) => awgn_channel(snr),
            (None, Some(c), Some(v)) => FblChannel::new(c, v),
            _ => Err(Error::Config("fbl needs either snr or both capacity and dispersion".into())),
        }
    }
}

fn default_trials() -> usize {
    1
}

/// A complete, declarative description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector: Option<DetectorSpec>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub bins: Bins,
    #[serde(default)]
    pub plot: Plot,
    /// `detect`: calibrate the threshold to this false-alarm rate instead
    /// of using zero. `roc`: also report `P_d` at this rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_pfa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fbl: Option<FblParams>,
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub master_seed: Option<u64>,
    pub trials: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub plot: Option<Plot>,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            ensemble: None,
            detector: None,
            trials: default_trials(),
            master_seed: 0,
            output_dir: None,
            bins: Bins::Auto,
            plot: Plot::On,
            target_pfa: None,
            fbl: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        Self::from_json(&text)
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        if let Some(s) = o.master_seed {
            self.master_seed = s;
        }
        if let Some(t) = o.trials {
            self.trials = t;
        }
        if let Some(d) = &o.output_dir {
            self.output_dir = Some(d.clone());
        }
        if let Some(p) = o.plot {
            self.plot = p;
        }
        self
    }

    /// Flag, then config, then [`OUTPUT_DIR_ENV`], then [`DEFAULT_OUTPUT_DIR`].
    pub fn resolved_output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
    }

    fn need_ensemble(&self) -> Result<&EnsembleSpec> {
        self.ensemble
            .as_ref()
            .ok_or_else(|| Error::Config(format!("{} needs an ensemble", self.command.name())))
    }

    fn forbid(&self, field: &str, present: bool) -> Result<()> {
        if present {
            return Err(Error::Config(format!("{} does not take {field}", self.command.name())));
        }
        Ok(())
    }

    /// Full validation, run before anything is computed or written.
    pub fn validate(&self) -> Result<()> {
        let cmd = self.command.name();
        if self.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if let Some(p) = self.target_pfa {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Config(format!("target_pfa {p} must lie in (0, 1)")));
            }
        }
        let spectral = matches!(self.command, Command::Esd | Command::Ringlaw | Command::GinibreProduct | Command::Erm);
        if spectral || self.command == Command::Fbl || self.command == Command::Selftest {
            self.forbid("a detector", self.detector.is_some())?;
            self.forbid("target_pfa", self.target_pfa.is_some())?;
        }
        if self.command != Command::Fbl {
            self.forbid("fbl parameters", self.fbl.is_some())?;
        }
        if self.command != Command::Esd {
            self.forbid("bins", self.bins != Bins::Auto)?;
        }
        match self.command {
            Command::Esd => {
                let e = self.need_ensemble()?;
                if !matches!(e, EnsembleSpec::Noise { .. } | EnsembleSpec::SignalPlusNoise { .. }) {
                    return Err(Error::Config("esd needs a noise or signal-plus-noise ensemble".into()));
                }
                e.validate()
            }
            Command::Ringlaw => match self.need_ensemble()? {
                e @ EnsembleSpec::RingProduct { n, samples, .. } => {
                    if n == samples {
                        return Err(Error::Config("ringlaw needs c = n/N < 1".into()));
                    }
                    e.validate()
                }
                _ => Err(Error::Config("ringlaw needs a ring-product ensemble".into())),
            },
            Command::GinibreProduct => match self.need_ensemble()? {
                e @ (EnsembleSpec::GinibreProduct { .. } | EnsembleSpec::Ginibre { .. }) => e.validate(),
                _ => Err(Error::Config("ginibre-product needs a ginibre or ginibre-product ensemble".into())),
            },
            Command::Erm => match self.need_ensemble()? {
                e @ EnsembleSpec::Erm { .. } => e.validate(),
                _ => Err(Error::Config("erm needs an erm ensemble".into())),
            },
            Command::Detect | Command::Roc => {
                let e = self.need_ensemble()?;
                e.validate()?;
                let d = self
                    .detector
                    .as_ref()
                    .ok_or_else(|| Error::Config(format!("{cmd} needs a detector")))?;
                d.validate()?;
                let fits = match d {
                    DetectorSpec::RingInner { .. } => matches!(e, EnsembleSpec::RingProduct { n, samples, .. } if n < samples),
                    _ => matches!(e, EnsembleSpec::Noise { .. } | EnsembleSpec::SignalPlusNoise { .. }),
                };
                if !fits {
                    return Err(Error::Config(format!("detector {} does not apply to this ensemble", d.name())));
                }
                let calibrating = self.command == Command::Roc || self.target_pfa.is_some();
                if calibrating && self.trials < MIN_TRIALS {
                    return Err(Error::Config(format!("{cmd} needs at least {MIN_TRIALS} trials")));
                }
                Ok(())
            }
            Command::Fbl => {
                self.forbid("an ensemble", self.ensemble.is_some())?;
                let f = self.fbl.as_ref().ok_or_else(|| Error::Config("fbl needs fbl parameters".into()))?;
                f.channel()?;
                if !(f.epsilon > 0.0 && f.epsilon < 1.0) {
                    return Err(Error::Config(format!("epsilon {} must lie in (0, 1)", f.epsilon)));
                }
                if f.n_min == 0 || f.n_max < f.n_min || f.points == 0 {
                    return Err(Error::Config("bad blocklength grid".into()));
                }
                Ok(())
            }
            Command::Selftest => self.forbid("an ensemble", self.ensemble.is_some()),
        }
    }
}
