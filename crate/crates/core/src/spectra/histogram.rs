use serde::{Deserialize, Serialize};

use super::{Spectrum, SpectrumKind};
use crate::{Error, Result};

/// Floor on the Freedman–Diaconis bin count.
pub const MIN_AUTO_BINS: usize = 16;
const MAX_AUTO_BINS: usize = 4096;

/// Bin count selection: `"auto"` (Freedman–Diaconis) or an explicit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "BinsRepr", into = "BinsRepr")]
pub enum Bins {
    #[default]
    Auto,
    Count(usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BinsRepr {
    Count(usize),
    Word(String),
}

impl TryFrom<BinsRepr> for Bins {
    type Error = String;

    fn try_from(r: BinsRepr) -> Result<Self, String> {
        match r {
            BinsRepr::Count(0) => Err("bin count must be positive".into()),
            BinsRepr::Count(k) => Ok(Bins::Count(k)),
            BinsRepr::Word(w) if w == "auto" => Ok(Bins::Auto),
            BinsRepr::Word(w) => Err(format!("bins must be \"auto\" or a positive count, got {w:?}")),
        }
    }
}

impl From<Bins> for BinsRepr {
    fn from(b: Bins) -> Self {
        match b {
            Bins::Auto => BinsRepr::Word("auto".into()),
            Bins::Count(k) => BinsRepr::Count(k),
        }
    }
}

impl std::str::FromStr for Bins {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Bins::Auto);
        }
        let k: usize = s.parse().map_err(|_| format!("bins must be \"auto\" or a count, got {s:?}"))?;
        Bins::try_from(BinsRepr::Count(k))
    }
}

/// Density-normalised histogram: `Σ masses[i] · (edges[i+1] − edges[i]) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub masses: Vec<f64>,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(m, e)| m * (e[1] - e[0]))
            .sum()
    }

    /// `(lo, hi, mass)` triples.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.bin_edges.windows(2).zip(&self.masses).map(|(e, m)| (e[0], e[1], *m))
    }

    /// Largest absolute gap between the bins and a reference bin average.
    pub fn sup_deviation(&self, mut reference: impl FnMut(f64, f64) -> Result<f64>) -> Result<f64> {
        let mut worst = 0.0f64;
        for (lo, hi, m) in self.rows() {
            worst = worst.max((m - reference(lo, hi)?).abs());
        }
        Ok(worst)
    }
}

fn freedman_diaconis(sorted: &[f64]) -> usize {
    let n = sorted.len();
    let range = sorted[n - 1] - sorted[0];
    let iqr = super::quantile(sorted, 0.75) - super::quantile(sorted, 0.25);
    if range <= 0.0 || iqr <= 0.0 {
        return MIN_AUTO_BINS;
    }
    let width = 2.0 * iqr / (n as f64).cbrt();
    ((range / width).ceil() as usize).clamp(MIN_AUTO_BINS, MAX_AUTO_BINS)
}

/// Density histogram of the (real) eigenvalues of a Hermitian spectrum.
pub fn esd_histogram(spec: &Spectrum, bins: Bins) -> Result<Histogram> {
    if spec.kind != SpectrumKind::Hermitian {
        return Err(Error::InvalidParameter("esd_histogram needs a hermitian spectrum".into()));
    }
    if spec.is_empty() {
        return Err(Error::InvalidParameter("empty spectrum".into()));
    }
    let mut values = spec.real_parts();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("spectrum"));
    }
    values.sort_by(f64::total_cmp);
    let count = match bins {
        Bins::Auto => freedman_diaconis(&values),
        Bins::Count(0) => return Err(Error::InvalidParameter("bin count must be positive".into())),
        Bins::Count(k) => k,
    };
    let (mut lo, mut hi) = (values[0], values[values.len() - 1]);
    if hi <= lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / count as f64;
    let mut edges: Vec<f64> = (0..=count).map(|i| lo + i as f64 * width).collect();
    edges[count] = hi;

    let mut counts = vec![0usize; count];
    for v in &values {
        let idx = (((v - lo) / width).floor() as usize).min(count - 1);
        counts[idx] += 1;
    }
    let total = values.len() as f64;
    let masses = counts
        .iter()
        .zip(edges.windows(2))
        .map(|(&k, e)| k as f64 / (total * (e[1] - e[0])))
        .collect();
    Ok(Histogram { bin_edges: edges, masses })
}
