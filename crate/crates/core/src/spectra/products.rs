//! Products of non-Hermitian random matrices.

use faer::{c64, Mat};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{eig_general, Spectrum};
use crate::ensembles::{sample_covariance, sample_ginibre, DataMatrix, SquareComplexMatrix};
use crate::linalg;
use crate::seed::{derive_seed, rng_from_seed, Stream};
use crate::{Error, Result};

fn haar_unitary(n: usize, seed: u64) -> Mat<c64> {
    let mut rng = rng_from_seed(seed);
    let g = Mat::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64::new(re, im)
    });
    linalg::haar_from_ginibre(g.as_ref())
}

/// The singular-value-equivalent square matrix `P·W` of an `n × N` data
/// matrix, where `P = ((1/N) X Xᴴ)^{1/2}` and `W` is Haar unitary drawn from
/// `seed`. Its singular values are those of `X/√N`.
pub fn singular_value_equivalent(x: &DataMatrix, seed: u64) -> Result<SquareComplexMatrix> {
    if x.n() > x.samples() {
        return Err(Error::DimensionMismatch(format!(
            "singular value equivalent needs n <= N, got {}x{}",
            x.n(),
            x.samples()
        )));
    }
    let p = linalg::psd_sqrt(sample_covariance(x)?.entries())?;
    let w = haar_unitary(x.n(), seed);
    SquareComplexMatrix::new(&p * &w)
}

/// Scales each row to mean 0 and (population) variance `1/n`.
fn standardize_rows(z: &mut Mat<c64>) -> Result<()> {
    let n = z.nrows();
    let cols = z.ncols();
    for i in 0..n {
        let mean: c64 = (0..cols).map(|j| z[(i, j)]).sum::<c64>() / cols as f64;
        let var = (0..cols).map(|j| (z[(i, j)] - mean).norm_sqr()).sum::<f64>() / cols as f64;
        if !(var > 0.0) {
            return Err(Error::InvalidParameter(format!("row {i} of the product is constant")));
        }
        let scale = 1.0 / (var * n as f64).sqrt();
        for j in 0..cols {
            z[(i, j)] = (z[(i, j)] - mean) * scale;
        }
    }
    Ok(())
}

/// Eigenvalues of the row-standardized product `Π_ℓ SVE(X_ℓ)`.
///
/// Factor `ℓ` draws its Haar unitary from `derive_seed(seed, ℓ, Haar)`.
pub fn standardized_product(factors: &[DataMatrix], seed: u64) -> Result<Spectrum> {
    let first = factors
        .first()
        .ok_or_else(|| Error::InvalidParameter("product needs at least one factor".into()))?;
    let (n, samples) = (first.n(), first.samples());
    if let Some(bad) = factors.iter().find(|x| x.n() != n || x.samples() != samples) {
        return Err(Error::DimensionMismatch(format!(
            "all factors must be {n}x{samples}, found {}x{}",
            bad.n(),
            bad.samples()
        )));
    }
    let mut product: Option<Mat<c64>> = None;
    for (l, x) in factors.iter().enumerate() {
        let sve = singular_value_equivalent(x, derive_seed(seed, l as u64, Stream::Haar))?.into_entries();
        product = Some(match product {
            None => sve,
            Some(acc) => &acc * &sve,
        });
    }
    let mut z = product.expect("at least one factor");
    standardize_rows(&mut z)?;
    Ok(eig_general(&SquareComplexMatrix::new(z)?)?.with_aspect_ratio(n as f64 / samples as f64))
}

/// Eigenvalues of the product of `k` independent `n × n` Ginibre matrices;
/// factor `i` is drawn from `derive_seed(seed, i, Ginibre)`.
pub fn ginibre_product_spectrum(k: usize, n: usize, seed: u64) -> Result<Spectrum> {
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one Ginibre factor".into()));
    }
    let mut product: Option<Mat<c64>> = None;
    for i in 0..k {
        let g = sample_ginibre(n, derive_seed(seed, i as u64, Stream::Ginibre))?.into_entries();
        product = Some(match product {
            None => g,
            Some(acc) => &acc * &g,
        });
    }
    eig_general(&SquareComplexMatrix::new(product.expect("k >= 1"))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_gaussian_matrix, Field, Hypothesis};
    use crate::spectra::{ginibre_product_radial_cdf, ks_statistic};

    #[test]
    fn isometry_rows_give_unitary_output() {
        // rows of a scaled DFT matrix are orthogonal with norm √N
        let (n, samples) = (4, 8);
        let x = Mat::from_fn(n, samples, |i, j| {
            let t = 2.0 * std::f64::consts::PI * (i * j) as f64 / samples as f64;
            c64::new(t.cos(), t.sin())
        });
        let x = DataMatrix::from_entries(x, 0.0, Field::Complex, Hypothesis::H0, 0).unwrap();
        let u = singular_value_equivalent(&x, 3).unwrap();
        let eye = u.entries().adjoint() * u.entries();
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((eye[(i, j)] - c64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_values_preserved() {
        let x = sample_gaussian_matrix(20, 35, 1.0, Field::Complex, 4).unwrap();
        let sve = singular_value_equivalent(&x, 9).unwrap();
        let mut got = sve.entries().singular_values().unwrap();
        let scaled = Mat::from_fn(20, 35, |i, j| x.entries()[(i, j)] / 35f64.sqrt());
        let mut want = scaled.singular_values().unwrap();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9, "{g} vs {w}");
        }
    }

    #[test]
    fn tall_input_rejected() {
        let x = sample_gaussian_matrix(5, 3, 1.0, Field::Complex, 1).unwrap();
        assert!(singular_value_equivalent(&x, 0).is_err());
    }

    #[test]
    fn mismatched_factors_rejected() {
        let a = sample_gaussian_matrix(4, 8, 1.0, Field::Complex, 1).unwrap();
        let b = sample_gaussian_matrix(4, 9, 1.0, Field::Complex, 2).unwrap();
        assert!(matches!(standardized_product(&[a, b], 0), Err(Error::DimensionMismatch(_))));
        assert!(standardized_product(&[], 0).is_err());
    }

    #[test]
    fn product_is_deterministic() {
        let a = sample_gaussian_matrix(30, 60, 1.0, Field::Complex, 1).unwrap();
        let b = sample_gaussian_matrix(30, 60, 1.0, Field::Complex, 2).unwrap();
        let s1 = standardized_product(&[a.clone(), b.clone()], 5).unwrap();
        let s2 = standardized_product(&[a, b], 5).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.c, Some(0.5));
    }

    #[test]
    fn single_ginibre_radial_law() {
        let s = ginibre_product_spectrum(1, 300, 8).unwrap();
        let r: Vec<f64> = s.eigenvalues.iter().map(|z| z.norm()).collect();
        assert!(ks_statistic(&r, |x| ginibre_product_radial_cdf(x, 1)) <= 0.06);
    }
}
