use faer::{c64, Mat};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{check_dims, check_sigma, DataMatrix, Field, Hypothesis, SignalDirection, SignalSpec, SquareComplexMatrix};
use crate::seed::{derive_seed, rng_from_seed, Stream};
use crate::{Error, Result};

#[inline]
fn draw<R: Rng>(rng: &mut R, field: Field, scale: f64) -> c64 {
    match field {
        Field::Real => c64::new(scale * rng.sample::<f64, _>(StandardNormal), 0.0),
        Field::Complex => {
            let s = scale * std::f64::consts::FRAC_1_SQRT_2;
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c64::new(s * re, s * im)
        }
    }
}

/// i.i.d. zero-mean Gaussian `n × N` matrix with per-entry variance `σ²`,
/// labelled H0. Entries are drawn column by column.
pub fn sample_gaussian_matrix(
    n: usize,
    samples: usize,
    sigma: f64,
    field: Field,
    seed: u64,
) -> Result<DataMatrix> {
    check_dims(n, samples)?;
    check_sigma(sigma)?;
    let mut rng = rng_from_seed(seed);
    let entries = Mat::from_fn(n, samples, |_, _| draw(&mut rng, field, sigma));
    DataMatrix::from_entries(entries, sigma, field, Hypothesis::H0, seed)
}

/// Square complex Ginibre matrix with entry variance `1/n`, so the spectrum
/// fills the unit disk as `n` grows.
pub fn sample_ginibre(n: usize, seed: u64) -> Result<SquareComplexMatrix> {
    check_dims(n, n)?;
    let mut rng = rng_from_seed(seed);
    let scale = (1.0 / n as f64).sqrt();
    let entries = Mat::from_fn(n, n, |_, _| draw(&mut rng, Field::Complex, scale));
    SquareComplexMatrix::new(entries)
}

/// `Y = S + X` with `X` exactly the output of [`sample_gaussian_matrix`] for
/// the same seed and `S = Σ_k √p_k h_k g_kᵀ`. Components with zero power are
/// skipped, so an all-zero power vector reproduces the noise matrix bit for
/// bit.
pub fn sample_signal_plus_noise(
    n: usize,
    samples: usize,
    spec: &SignalSpec,
    sigma: f64,
    field: Field,
    seed: u64,
) -> Result<DataMatrix> {
    check_dims(n, samples)?;
    spec.validate(n)?;
    if field == Field::Real && spec.direction == SignalDirection::Fourier {
        return Err(Error::InvalidParameter(
            "fourier signal directions require the complex field".into(),
        ));
    }
    let noise = sample_gaussian_matrix(n, samples, sigma, field, seed)?;
    let mut entries = noise.into_entries();

    let mut rng = rng_from_seed(derive_seed(seed, 0, Stream::Signal));
    for (k, &power) in spec.powers.iter().enumerate() {
        // symbols are drawn even for silent components so that the other
        // components see the same symbol stream regardless of powers
        let symbols: Vec<c64> = (0..samples).map(|_| draw(&mut rng, field, 1.0)).collect();
        if power == 0.0 {
            continue;
        }
        let amplitude = power.sqrt();
        let direction: Vec<c64> = (0..n).map(|i| spec.direction_entry(k, i, n) * amplitude).collect();
        for (i, h) in direction.iter().enumerate() {
            if *h == c64::new(0.0, 0.0) {
                continue;
            }
            for (j, g) in symbols.iter().enumerate() {
                entries[(i, j)] += *h * *g;
            }
        }
    }
    DataMatrix::from_entries(entries, sigma, field, Hypothesis::H1, seed)
}

/// A single real observation for the known-mean Gaussian model:
/// `y = x` under H0 and `y = m + x` under H1, with `x ~ N(0, σ² I)`.
pub fn sample_observation(mean: &[f64], sigma: f64, hypothesis: Hypothesis, seed: u64) -> Result<Vec<f64>> {
    check_dims(mean.len(), 1)?;
    check_sigma(sigma)?;
    let mut rng = rng_from_seed(seed);
    Ok(mean
        .iter()
        .map(|&m| {
            let x = sigma * rng.sample::<f64, _>(StandardNormal);
            match hypothesis {
                Hypothesis::H0 => x,
                Hypothesis::H1 => m + x,
            }
        })
        .collect())
}
