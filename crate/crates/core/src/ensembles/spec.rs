//! Declarative ensemble descriptions, realized from a single seed.

use serde::{Deserialize, Serialize};

use super::{
    build_erm, build_erm_with_wavenumber, check_dims, check_sigma, sample_gaussian_matrix, sample_ginibre,
    sample_point_cloud, sample_signal_plus_noise, DataMatrix, Field, SignalDirection, SignalSpec,
    SquareComplexMatrix,
};
use crate::seed::{derive_seed, Stream};
use crate::spectra::{ginibre_product_spectrum, standardized_product, Spectrum};
use crate::{Error, Result};

fn unit_sigma() -> f64 {
    1.0
}

/// One ensemble with all of its parameters. `N` is the sample count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EnsembleSpec {
    Noise {
        n: usize,
        #[serde(rename = "N")]
        samples: usize,
        #[serde(default = "unit_sigma")]
        sigma: f64,
        #[serde(default)]
        field: Field,
    },
    SignalPlusNoise {
        n: usize,
        #[serde(rename = "N")]
        samples: usize,
        #[serde(default = "unit_sigma")]
        sigma: f64,
        #[serde(default)]
        field: Field,
        signal: SignalSpec,
    },
    Ginibre {
        n: usize,
    },
    GinibreProduct {
        k: usize,
        n: usize,
    },
    /// Row-standardized product of `factors` singular-value equivalents,
    /// each built from an independent `n × N` data matrix.
    RingProduct {
        factors: usize,
        n: usize,
        #[serde(rename = "N")]
        samples: usize,
        #[serde(default = "unit_sigma")]
        sigma: f64,
        #[serde(default)]
        field: Field,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        signal: Option<SignalSpec>,
    },
    Erm {
        points: usize,
        rho: f64,
        lambda0: f64,
        /// Overrides `2π/λ₀`; zero gives the static kernel.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        wavenumber: Option<f64>,
    },
}

/// What an ensemble produces for one seed.
#[derive(Debug, Clone)]
pub enum Realization {
    Data(DataMatrix),
    Square(SquareComplexMatrix),
    /// Spectrum of a matrix product; `factors` is the number of terms.
    Product { spectrum: Spectrum, factors: usize },
}

fn check_signal(signal: &SignalSpec, n: usize, field: Field) -> Result<()> {
    signal.validate(n)?;
    if field == Field::Real && signal.direction == SignalDirection::Fourier {
        return Err(Error::InvalidParameter("fourier signal directions require the complex field".into()));
    }
    Ok(())
}

impl EnsembleSpec {
    pub fn noise(n: usize, samples: usize, sigma: f64, field: Field) -> Self {
        Self::Noise { n, samples, sigma, field }
    }

    pub fn signal_plus_noise(n: usize, samples: usize, sigma: f64, field: Field, signal: SignalSpec) -> Self {
        Self::SignalPlusNoise { n, samples, sigma, field, signal }
    }

    /// Checks every parameter without drawing anything.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Noise { n, samples, sigma, .. } => {
                check_dims(*n, *samples)?;
                check_sigma(*sigma)
            }
            Self::SignalPlusNoise { n, samples, sigma, field, signal } => {
                check_dims(*n, *samples)?;
                check_sigma(*sigma)?;
                check_signal(signal, *n, *field)
            }
            Self::Ginibre { n } => check_dims(*n, *n),
            Self::GinibreProduct { k, n } => {
                if *k == 0 {
                    return Err(Error::InvalidParameter("need at least one Ginibre factor".into()));
                }
                check_dims(*n, *n)
            }
            Self::RingProduct { factors, n, samples, sigma, field, signal } => {
                if *factors == 0 {
                    return Err(Error::InvalidParameter("ring product needs at least one factor".into()));
                }
                check_dims(*n, *samples)?;
                if n > samples {
                    return Err(Error::InvalidParameter(format!("ring product needs n <= N, got {n} > {samples}")));
                }
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::InvalidParameter(format!("ring product needs sigma > 0, got {sigma}")));
                }
                match signal {
                    Some(s) => check_signal(s, *n, *field),
                    None => Ok(()),
                }
            }
            Self::Erm { points, rho, lambda0, wavenumber } => {
                check_dims(*points, *points)?;
                if !(rho.is_finite() && *rho > 0.0 && lambda0.is_finite() && *lambda0 > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "rho and lambda0 must be positive, got {rho} and {lambda0}"
                    )));
                }
                match wavenumber {
                    Some(k) if !k.is_finite() => {
                        Err(Error::InvalidParameter(format!("wavenumber {k} must be finite")))
                    }
                    _ => Ok(()),
                }
            }
        }
    }

    /// The same ensemble with any signal removed.
    pub fn h0(&self) -> Self {
        match self {
            Self::SignalPlusNoise { n, samples, sigma, field, .. } => {
                Self::Noise { n: *n, samples: *samples, sigma: *sigma, field: *field }
            }
            Self::RingProduct { factors, n, samples, sigma, field, .. } => Self::RingProduct {
                factors: *factors,
                n: *n,
                samples: *samples,
                sigma: *sigma,
                field: *field,
                signal: None,
            },
            other => other.clone(),
        }
    }

    /// `n / N` for data-matrix ensembles.
    pub fn aspect_ratio(&self) -> Option<f64> {
        match self {
            Self::Noise { n, samples, .. }
            | Self::SignalPlusNoise { n, samples, .. }
            | Self::RingProduct { n, samples, .. } => Some(*n as f64 / *samples as f64),
            _ => None,
        }
    }

    /// Draws one realization. Noise uses `seed` directly, so an ensemble
    /// and its [`h0`](Self::h0) share the noise for equal seeds. Ring
    /// factor `ℓ` is drawn from `derive_seed(seed, ℓ, Factor)`.
    pub fn realize(&self, seed: u64) -> Result<Realization> {
        self.validate()?;
        Ok(match self {
            Self::Noise { n, samples, sigma, field } => {
                Realization::Data(sample_gaussian_matrix(*n, *samples, *sigma, *field, seed)?)
            }
            Self::SignalPlusNoise { n, samples, sigma, field, signal } => {
                Realization::Data(sample_signal_plus_noise(*n, *samples, signal, *sigma, *field, seed)?)
            }
            Self::Ginibre { n } => Realization::Square(sample_ginibre(*n, seed)?),
            Self::GinibreProduct { k, n } => {
                Realization::Product { spectrum: ginibre_product_spectrum(*k, *n, seed)?, factors: *k }
            }
            Self::RingProduct { factors, n, samples, sigma, field, signal } => {
                let data = (0..*factors)
                    .map(|l| {
                        let s = derive_seed(seed, l as u64, Stream::Factor);
                        match signal {
                            Some(sig) => sample_signal_plus_noise(*n, *samples, sig, *sigma, *field, s),
                            None => sample_gaussian_matrix(*n, *samples, *sigma, *field, s),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Realization::Product { spectrum: standardized_product(&data, seed)?, factors: *factors }
            }
            Self::Erm { points, rho, lambda0, wavenumber } => {
                let cloud = sample_point_cloud(*points, *rho, *lambda0, seed)?;
                Realization::Square(match wavenumber {
                    Some(k) => build_erm_with_wavenumber(&cloud, *k)?,
                    None => build_erm(&cloud)?,
                })
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h0_shares_noise_with_zero_power_signal() {
        let h1 = EnsembleSpec::signal_plus_noise(6, 9, 1.0, Field::Complex, SignalSpec::rank_one(0.0));
        let (Realization::Data(a), Realization::Data(b)) = (h1.realize(3).unwrap(), h1.h0().realize(3).unwrap())
        else {
            panic!("expected data matrices");
        };
        assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn strict_schema() {
        let ok: EnsembleSpec = serde_json::from_str(r#"{"kind":"noise","n":4,"N":8}"#).unwrap();
        assert_eq!(ok, EnsembleSpec::noise(4, 8, 1.0, Field::Complex));
        assert!(serde_json::from_str::<EnsembleSpec>(r#"{"kind":"noise","n":4,"N":8,"extra":1}"#).is_err());
        assert!(serde_json::from_str::<EnsembleSpec>(r#"{"kind":"noise","n":4,"N":8,"field":"quaternion"}"#).is_err());
        let back: EnsembleSpec = serde_json::from_str(&serde_json::to_string(&ok).unwrap()).unwrap();
        assert_eq!(back, ok);
    }

    #[test]
    fn validation_catches_bad_parameters() {
        assert!(EnsembleSpec::noise(0, 3, 1.0, Field::Real).validate().is_err());
        assert!(EnsembleSpec::noise(3, 3, -1.0, Field::Real).validate().is_err());
        let fourier = SignalSpec::rank_one(1.0).with_direction(SignalDirection::Fourier);
        assert!(EnsembleSpec::signal_plus_noise(3, 3, 1.0, Field::Real, fourier).validate().is_err());
        let ring = EnsembleSpec::RingProduct { factors: 1, n: 5, samples: 4, sigma: 1.0, field: Field::Complex, signal: None };
        assert!(ring.validate().is_err());
        let erm = EnsembleSpec::Erm { points: 3, rho: 0.0, lambda0: 1.0, wavenumber: None };
        assert!(erm.validate().is_err());
    }

    #[test]
    fn ring_product_carries_aspect_ratio() {
        let ring = EnsembleSpec::RingProduct { factors: 2, n: 10, samples: 20, sigma: 1.0, field: Field::Complex, signal: None };
        match ring.realize(1).unwrap() {
            Realization::Product { spectrum, factors } => {
                assert_eq!(factors, 2);
                assert_eq!(spectrum.c, Some(0.5));
                assert_eq!(spectrum.len(), 10);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
