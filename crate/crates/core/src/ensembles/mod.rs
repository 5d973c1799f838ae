//! Deterministic, seeded matrix ensembles.
//!
//! Data matrices are `n × N`: `n` sensors (rows) by `N` samples (columns),
//! with aspect ratio `c = n / N`. Complex noise is circularly symmetric with
//! total variance `σ²` per entry; real noise has variance `σ²`.

mod covariance;
mod erm;
mod gaussian;
mod spec;

pub use covariance::{hollow_wishart, normalized_trace, sample_covariance};
pub use erm::{build_erm, build_erm_with_wavenumber, sample_point_cloud, PointCloud, D_MIN_FRACTION, MAX_PLACEMENT_ATTEMPTS};
pub use gaussian::{
    sample_gaussian_matrix, sample_ginibre, sample_observation, sample_signal_plus_noise,
};
pub use spec::{EnsembleSpec, Realization};

use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    #[default]
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    H0,
    H1,
}

/// Direction vectors `h_k` of the rank-k signal model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SignalDirection {
    /// `h_k = e_k`: the signal lives on the first `k` sensors.
    #[default]
    Canonical,
    /// `h_k[i] = exp(2πi·i·k/n)/√n`: orthonormal and spread over every sensor.
    /// Complex field only.
    Fourier,
}

/// Rank-k signal model `S = Σ_k √p_k h_k g_kᵀ` with unit-norm, orthonormal
/// `h_k` and unit-variance symbol rows `g_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalSpec {
    pub powers: Vec<f64>,
    #[serde(default)]
    pub direction: SignalDirection,
    /// Deterministic mean `m` of a single observation, used by the
    /// known-mean Gaussian model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_vector: Option<Vec<f64>>,
}

impl SignalSpec {
    pub fn rank_one(power: f64) -> Self {
        Self {
            powers: vec![power],
            direction: SignalDirection::Canonical,
            mean_vector: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.powers.len()
    }

    pub fn with_direction(mut self, direction: SignalDirection) -> Self {
        self.direction = direction;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.powers.is_empty() {
            return Err(Error::InvalidParameter("signal rank must be at least 1".into()));
        }
        if self.rank() > n {
            return Err(Error::InvalidParameter(format!(
                "signal rank {} exceeds row count {n}",
                self.rank()
            )));
        }
        if let Some(p) = self.powers.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidParameter(format!("signal power {p} must be finite and nonnegative")));
        }
        if let Some(m) = &self.mean_vector {
            if m.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "mean vector has length {}, expected {n}",
                    m.len()
                )));
            }
        }
        Ok(())
    }

    /// The `i`-th entry of direction vector `h_k` for an `n`-sensor array.
    pub fn direction_entry(&self, k: usize, i: usize, n: usize) -> c64 {
        match self.direction {
            SignalDirection::Canonical => {
                if i == k {
                    c64::new(1.0, 0.0)
                } else {
                    c64::new(0.0, 0.0)
                }
            }
            SignalDirection::Fourier => {
                let phase = 2.0 * std::f64::consts::PI * ((i * k) % n) as f64 / n as f64;
                c64::new(phase.cos(), phase.sin()) / (n as f64).sqrt()
            }
        }
    }
}

/// An `n × N` sample matrix together with its generation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    entries: Mat<c64>,
    sigma: f64,
    field: Field,
    hypothesis: Hypothesis,
    seed: u64,
}

impl DataMatrix {
    pub fn from_entries(
        entries: Mat<c64>,
        sigma: f64,
        field: Field,
        hypothesis: Hypothesis,
        seed: u64,
    ) -> Result<Self> {
        check_dims(entries.nrows(), entries.ncols())?;
        if !linalg::all_finite(entries.as_ref()) {
            return Err(Error::NonFinite("data matrix"));
        }
        Ok(Self { entries, sigma, field, hypothesis, seed })
    }

    pub fn entries(&self) -> MatRef<'_, c64> {
        self.entries.as_ref()
    }

    pub fn into_entries(self) -> Mat<c64> {
        self.entries
    }

    /// Sensor dimension.
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Sample count.
    pub fn samples(&self) -> usize {
        self.entries.ncols()
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.n() as f64 / self.samples() as f64
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn hypothesis(&self) -> Hypothesis {
        self.hypothesis
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Multiplies every entry by `alpha`, keeping the metadata in step.
    pub fn scaled(&self, alpha: f64) -> Self {
        let entries = Mat::from_fn(self.n(), self.samples(), |i, j| self.entries[(i, j)] * alpha);
        Self { entries, sigma: self.sigma * alpha.abs(), ..*self }
    }
}

/// A square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareComplexMatrix {
    entries: Mat<c64>,
}

impl SquareComplexMatrix {
    pub fn new(entries: Mat<c64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "expected a square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        check_dims(entries.nrows(), entries.ncols())?;
        if !linalg::all_finite(entries.as_ref()) {
            return Err(Error::NonFinite("square matrix"));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> MatRef<'_, c64> {
        self.entries.as_ref()
    }

    pub fn into_entries(self) -> Mat<c64> {
        self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> c64 {
        (0..self.n()).map(|i| self.entries[(i, i)]).sum()
    }
}

/// Relative tolerance on `‖H − Hᴴ‖_F / ‖H‖_F`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// A Hermitian matrix with finite entries and a real diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: Mat<c64>,
}

impl HermitianMatrix {
    pub fn new(entries: Mat<c64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "expected a square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        check_dims(entries.nrows(), entries.ncols())?;
        if !linalg::all_finite(entries.as_ref()) {
            return Err(Error::NonFinite("hermitian matrix"));
        }
        let defect = linalg::hermitian_defect(entries.as_ref());
        if defect > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian(defect));
        }
        let mut entries = entries;
        for i in 0..entries.nrows() {
            entries[(i, i)].im = 0.0;
        }
        Ok(Self { entries })
    }

    /// Builds a diagonal matrix; handy for tests and examples.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::new(Mat::from_fn(n, n, |i, j| {
            if i == j {
                c64::new(diag[i], 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        }))
    }

    pub fn entries(&self) -> MatRef<'_, c64> {
        self.entries.as_ref()
    }

    pub fn into_entries(self) -> Mat<c64> {
        self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.entries[(i, i)].re).sum()
    }

    /// `H − s·I`.
    pub fn shifted(&self, s: f64) -> Self {
        let mut entries = self.entries.clone();
        for i in 0..self.n() {
            entries[(i, i)].re -= s;
        }
        Self { entries }
    }
}

pub(crate) fn check_dims(n: usize, samples: usize) -> Result<()> {
    if n == 0 || samples == 0 {
        return Err(Error::InvalidDimension(format!(
            "dimensions must be positive, got {n}x{samples}"
        )));
    }
    Ok(())
}

pub(crate) fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!("sigma {sigma} must be finite and nonnegative")));
    }
    Ok(())
}
