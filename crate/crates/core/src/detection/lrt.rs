//! Known-mean Gaussian likelihood ratio test with shared covariance.

use faer::{Col, Mat, Side};
use faer::linalg::solvers::Solve;

use crate::{Error, Result};

/// `y ~ N(0, R)` under H0 and `y ~ N(m, R)` under H1.
///
/// The sufficient statistic is `l(y) = mᵀ R⁻¹ y`; the model caches
/// `w = R⁻¹ m`.
#[derive(Debug, Clone)]
pub struct LrtModel {
    mean: Vec<f64>,
    covariance: Mat<f64>,
    weights: Vec<f64>,
}

impl LrtModel {
    pub fn new(mean: Vec<f64>, covariance: Mat<f64>) -> Result<Self> {
        let n = mean.len();
        if n == 0 {
            return Err(Error::InvalidDimension("empty mean vector".into()));
        }
        if covariance.nrows() != n || covariance.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "covariance is {}x{}, mean has length {n}",
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("mean vector"));
        }
        let mut scale = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let v = covariance[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFinite("covariance"));
                }
                scale = scale.max(v.abs());
                if (v - covariance[(j, i)]).abs() > 1e-12 * (v.abs().max(1.0)) {
                    return Err(Error::InvalidParameter("covariance must be symmetric".into()));
                }
            }
        }
        let eig = covariance
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::NonConvergence("covariance eigenvalues"))?;
        let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > 1e-12 * scale) {
            return Err(Error::SingularCovariance);
        }
        let llt = covariance.llt(Side::Lower).map_err(|_| Error::SingularCovariance)?;
        let m = Col::from_fn(n, |i| mean[i]);
        let w = llt.solve(&m);
        let weights = (0..n).map(|i| w[i]).collect();
        Ok(Self { mean, covariance, weights })
    }

    /// `R = σ² I`.
    pub fn white(mean: Vec<f64>, sigma2: f64) -> Result<Self> {
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::SingularCovariance);
        }
        let n = mean.len();
        Self::new(mean, Mat::from_fn(n, n, |i, j| if i == j { sigma2 } else { 0.0 }))
    }

    pub fn n(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &Mat<f64> {
        &self.covariance
    }

    /// `R⁻¹ m`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `l(y) = mᵀ R⁻¹ y`, compared against a threshold by the caller.
pub fn lrt_statistic(y: &[f64], model: &LrtModel) -> Result<f64> {
    if y.len() != model.n() {
        return Err(Error::DimensionMismatch(format!(
            "observation has length {}, model expects {}",
            y.len(),
            model.n()
        )));
    }
    Ok(model.weights.iter().zip(y).map(|(w, v)| w * v).sum())
}

/// Deflection `d² = mᵀ R⁻¹ m`.
pub fn deflection(model: &LrtModel) -> f64 {
    model.weights.iter().zip(&model.mean).map(|(w, m)| w * m).sum()
}
