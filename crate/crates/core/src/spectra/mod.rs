//! Eigenvalue computation and the reference spectral laws.

mod fit;
mod histogram;
mod laws;
mod products;

pub use fit::{ks_statistic, ks_statistic_2d, quantile};
pub use histogram::{esd_histogram, Bins, Histogram, MIN_AUTO_BINS};
pub use laws::{
    ginibre_product_radial_cdf, mp_atom, mp_bin_average, mp_cdf, mp_density, mp_quantile, mp_support,
    ring_law_radial_cdf, ring_law_radii, MpLaw, RingLaw,
};
pub use products::{ginibre_product_spectrum, singular_value_equivalent, standardized_product};

use faer::{c64, Mat};

use crate::ensembles::{HermitianMatrix, SquareComplexMatrix};
use crate::linalg;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    Hermitian,
    General,
}

/// Eigenvalues of one matrix plus where they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<c64>,
    /// Side of the source matrix.
    pub n: usize,
    /// Aspect ratio `n/N` of the data behind the matrix, when there is one.
    pub c: Option<f64>,
    pub kind: SpectrumKind,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn with_aspect_ratio(mut self, c: f64) -> Self {
        self.c = Some(c);
        self
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    /// `|λ|` for every eigenvalue, ascending.
    pub fn sorted_moduli(&self) -> Vec<f64> {
        let mut r: Vec<f64> = self.eigenvalues.iter().map(|z| z.norm()).collect();
        r.sort_by(f64::total_cmp);
        r
    }

    pub fn sum(&self) -> c64 {
        self.eigenvalues.iter().copied().sum()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<Spectrum> {
    let values = linalg::hermitian_eigenvalues(h.entries())?;
    hermitian_spectrum(values, h.n())
}

/// Eigenvalues (ascending) together with the unitary eigenvector matrix `V`
/// such that `H = V Λ Vᴴ`.
pub fn eig_hermitian_with_vectors(h: &HermitianMatrix) -> Result<(Spectrum, Mat<c64>)> {
    let (values, vectors) = linalg::hermitian_eigen(h.entries())?;
    Ok((hermitian_spectrum(values, h.n())?, vectors))
}

fn hermitian_spectrum(values: Vec<f64>, n: usize) -> Result<Spectrum> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence("hermitian eigensolver returned non-finite values"));
    }
    Ok(Spectrum {
        eigenvalues: values.into_iter().map(|v| c64::new(v, 0.0)).collect(),
        n,
        c: None,
        kind: SpectrumKind::Hermitian,
    })
}

/// Complex eigenvalues of a general square matrix (Schur-based).
pub fn eig_general(a: &SquareComplexMatrix) -> Result<Spectrum> {
    let values = linalg::general_eigenvalues(a.entries())?;
    if values.len() != a.n() || values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonConvergence("general eigensolver returned non-finite values"));
    }
    Ok(Spectrum { eigenvalues: values, n: a.n(), c: None, kind: SpectrumKind::General })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_ginibre, HermitianMatrix};

    fn real_values(s: &Spectrum) -> Vec<f64> {
        s.real_parts()
    }

    #[test]
    fn identity_and_diagonal() {
        let eye = HermitianMatrix::from_diagonal(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(real_values(&eig_hermitian(&eye).unwrap()), vec![1.0, 1.0, 1.0]);
        let d = HermitianMatrix::from_diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let v = real_values(&eig_hermitian(&d).unwrap());
        for (got, want) in v.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn swap_matrix() {
        let m = Mat::from_fn(2, 2, |i, j| c64::new(if i != j { 1.0 } else { 0.0 }, 0.0));
        let v = real_values(&eig_hermitian(&HermitianMatrix::new(m).unwrap()).unwrap());
        assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_residual() {
        let a = Mat::from_fn(30, 30, |i, j| c64::new(((i * 13 + j * 7) % 11) as f64 - 5.0, ((i + j) % 3) as f64));
        let h = HermitianMatrix::new(&a + a.adjoint()).unwrap();
        let (s, v) = eig_hermitian_with_vectors(&h).unwrap();
        let lambda = Mat::from_fn(30, 30, |i, j| if i == j { s.eigenvalues[i] } else { c64::new(0.0, 0.0) });
        let back = &v * &lambda * v.adjoint();
        let diff = &back - h.entries();
        assert!(linalg::frobenius(diff.as_ref()) <= 1e-8 * linalg::frobenius(h.entries()));
        assert!(s.eigenvalues.windows(2).all(|w| w[0].re <= w[1].re));
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let m = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c64::new(-1.0, 0.0),
            (1, 0) => c64::new(1.0, 0.0),
            _ => c64::new(0.0, 0.0),
        });
        let s = eig_general(&SquareComplexMatrix::new(m).unwrap()).unwrap();
        let mut ims: Vec<f64> = s.eigenvalues.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-12 && (ims[1] - 1.0).abs() < 1e-12);
        assert!(s.eigenvalues.iter().all(|z| z.re.abs() < 1e-12));
    }

    #[test]
    fn upper_triangular_returns_diagonal() {
        let diag = [c64::new(2.0, 1.0), c64::new(-1.0, 0.5), c64::new(0.25, -3.0), c64::new(4.0, 0.0)];
        let m = Mat::from_fn(4, 4, |i, j| {
            if i == j {
                diag[i]
            } else if i < j {
                c64::new((i + j) as f64, 1.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        let s = eig_general(&SquareComplexMatrix::new(m).unwrap()).unwrap();
        for d in diag {
            assert!(s.eigenvalues.iter().any(|z| (z - d).norm() < 1e-10), "{d} missing");
        }
    }

    #[test]
    fn ginibre_trace_and_determinant_identities() {
        for seed in 0..5 {
            let g = sample_ginibre(40, seed).unwrap();
            let s = eig_general(&g).unwrap();
            let trace = g.trace();
            assert!((s.sum() - trace).norm() <= 1e-6 * trace.norm().max(1.0));
            let det = g.entries().determinant();
            let prod: c64 = s.eigenvalues.iter().copied().product();
            assert!((prod - det).norm() <= 1e-4 * det.norm(), "{prod} vs {det}");
        }
    }

    #[test]
    fn ginibre_spectrum_fills_unit_disk() {
        for seed in 0..3 {
            let s = eig_general(&sample_ginibre(500, 100 + seed).unwrap()).unwrap();
            let inside = s.eigenvalues.iter().filter(|z| z.norm() <= 1.1).count();
            assert!(inside as f64 >= 0.99 * 500.0, "seed {seed}: {inside}");
        }
    }
}
