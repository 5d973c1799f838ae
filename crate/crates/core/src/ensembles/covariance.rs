use faer::{c64, Mat};

use super::{check_sigma, DataMatrix, HermitianMatrix};
use crate::{Error, Result};

/// `(1/N) X Xᴴ`, the `n × n` sample covariance (outer-product form).
///
/// The strict upper triangle is mirrored from the lower one so the result is
/// Hermitian to the last bit.
pub fn sample_covariance(x: &DataMatrix) -> Result<HermitianMatrix> {
    let e = x.entries();
    let n = x.n();
    let inv = 1.0 / x.samples() as f64;
    let mut cov: Mat<c64> = e * e.adjoint();
    for j in 0..n {
        cov[(j, j)] = c64::new(cov[(j, j)].re * inv, 0.0);
        for i in j + 1..n {
            let v = cov[(i, j)] * inv;
            cov[(i, j)] = v;
            cov[(j, i)] = v.conj();
        }
    }
    // only overflow can break this
    HermitianMatrix::new(cov)
}

/// The hollow Wishart matrix `W_n = (1/N) X Xᴴ − σ² I`.
pub fn hollow_wishart(x: &DataMatrix, sigma: f64) -> Result<HermitianMatrix> {
    check_sigma(sigma)?;
    Ok(sample_covariance(x)?.shifted(sigma * sigma))
}

/// `(1/n) Tr(W_n) = ‖X‖²_F / (nN) − σ²`, computed in `O(nN)` without forming
/// the covariance.
pub fn normalized_trace(x: &DataMatrix, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let e = x.entries();
    let mut energy = 0.0;
    for j in 0..e.ncols() {
        energy += e.col(j).iter().fold(0.0, |acc, z| acc + z.norm_sqr());
    }
    let z = energy / (x.n() as f64 * x.samples() as f64) - sigma * sigma;
    if !z.is_finite() {
        return Err(Error::NonFinite("normalized trace"));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_gaussian_matrix, Field, Hypothesis};
    use crate::linalg;

    fn data(entries: Mat<c64>) -> DataMatrix {
        DataMatrix::from_entries(entries, 0.0, Field::Real, Hypothesis::H0, 0).unwrap()
    }

    #[test]
    fn identity_columns_give_half_identity() {
        let x = data(Mat::from_fn(2, 2, |i, j| c64::new(if i == j { 1.0 } else { 0.0 }, 0.0)));
        let c = sample_covariance(&x).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { 0.5 } else { 0.0 };
                assert_eq!(c.entries()[(i, j)], c64::new(expected, 0.0));
            }
        }
    }

    #[test]
    fn single_column_is_rank_one() {
        let col = [c64::new(1.0, 2.0), c64::new(-0.5, 0.0), c64::new(0.0, 3.0)];
        let x = data(Mat::from_fn(3, 1, |i, _| col[i]));
        let c = sample_covariance(&x).unwrap();
        let values = linalg::hermitian_eigenvalues(c.entries()).unwrap();
        let norm2: f64 = col.iter().map(|z| z.norm_sqr()).sum();
        assert!(values[0].abs() < 1e-12 && values[1].abs() < 1e-12);
        assert!((values[2] - norm2).abs() < 1e-12);
    }

    #[test]
    fn noise_eigenvalue_mean_matches_sigma_squared() {
        // mean eigenvalue = trace / n = ‖X‖²/(nN); over 10^6 entries this is
        // within 1% of σ² with overwhelming probability.
        let x = sample_gaussian_matrix(1000, 1000, 1.0, Field::Complex, 2).unwrap();
        let c = sample_covariance(&x).unwrap();
        let mean = c.trace() / 1000.0;
        assert!((mean - 1.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn hollow_of_zero_data_is_minus_identity() {
        let x = sample_gaussian_matrix(3, 5, 0.0, Field::Complex, 1).unwrap();
        let w = hollow_wishart(&x, 1.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { -1.0 } else { 0.0 };
                assert_eq!(w.entries()[(i, j)], c64::new(expected, 0.0));
            }
        }
        assert_eq!(normalized_trace(&x, 1.0).unwrap(), -1.0);
    }

    #[test]
    fn fast_trace_agrees_with_explicit_route() {
        for (seed, field) in [(1, Field::Real), (2, Field::Complex)] {
            let x = sample_gaussian_matrix(37, 53, 1.7, field, seed).unwrap();
            let explicit = hollow_wishart(&x, 1.2).unwrap().trace() / 37.0;
            let fast = normalized_trace(&x, 1.2).unwrap();
            assert!((explicit - fast).abs() < 1e-12, "{explicit} vs {fast}");
        }
    }

    #[test]
    fn hollow_mean_trace_is_centred() {
        // E[Z] = 0; complex noise gives Var(Z) = σ⁴/(nN) so the standard error
        // of the mean over T trials is 1/(√T · √(nN)).
        let (n, samples, trials) = (100usize, 100usize, 400u64);
        let z: Vec<f64> = (0..trials)
            .map(|t| {
                let x = sample_gaussian_matrix(n, samples, 1.0, Field::Complex, 1000 + t).unwrap();
                normalized_trace(&x, 1.0).unwrap()
            })
            .collect();
        let mean = z.iter().sum::<f64>() / trials as f64;
        let se = 1.0 / ((trials as f64).sqrt() * ((n * samples) as f64).sqrt());
        assert!(mean.abs() < 3.0 * se, "mean {mean}, se {se}");
    }
}
