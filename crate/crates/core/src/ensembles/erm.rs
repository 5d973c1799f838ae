//! Euclidean random matrices from 3D point clouds under the free-space
//! Green's function `exp(i k₀ r) / r`.

use std::f64::consts::PI;

use faer::{c64, Mat};
use rand::Rng;

use super::SquareComplexMatrix;
use crate::seed::rng_from_seed;
use crate::{Error, Result};

/// Minimum pairwise distance as a fraction of the wavelength.
pub const D_MIN_FRACTION: f64 = 0.01;
/// Rejection-sampling budget per point.
pub const MAX_PLACEMENT_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub positions: Vec<[f64; 3]>,
    /// Users per cubic meter.
    pub rho: f64,
    /// Free-space wavelength in meters.
    pub lambda0: f64,
    /// `2π / λ₀`, radians per meter.
    pub k0: f64,
    pub seed: u64,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Side of the cube the points were drawn in, `(N/ρ)^{1/3}`.
    pub fn side(&self) -> f64 {
        cube_side(self.len(), self.rho)
    }

    pub fn d_min(&self) -> f64 {
        D_MIN_FRACTION * self.lambda0
    }

    /// The dimensionless density `ρλ₀³`.
    pub fn density_parameter(&self) -> f64 {
        self.rho * self.lambda0.powi(3)
    }

    pub fn min_pairwise_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.positions.iter().enumerate() {
            for b in &self.positions[i + 1..] {
                best = best.min(distance(a, b));
            }
        }
        best
    }
}

fn cube_side(count: usize, rho: f64) -> f64 {
    (count as f64 / rho).cbrt()
}

#[inline]
fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// `N` points uniform in a cube of side `(N/ρ)^{1/3}`, each redrawn until it
/// keeps at least `λ₀/100` from the points already placed.
pub fn sample_point_cloud(count: usize, rho: f64, lambda0: f64, seed: u64) -> Result<PointCloud> {
    if count < 2 {
        return Err(Error::InvalidDimension(format!("point cloud needs at least 2 points, got {count}")));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter(format!("density {rho} must be positive")));
    }
    if !(lambda0.is_finite() && lambda0 > 0.0) {
        return Err(Error::InvalidParameter(format!("wavelength {lambda0} must be positive")));
    }
    let side = cube_side(count, rho);
    let d_min = D_MIN_FRACTION * lambda0;
    let mut rng = rng_from_seed(seed);
    let mut positions: Vec<[f64; 3]> = Vec::with_capacity(count);
    for index in 0..count {
        let mut placed = false;
        for _ in 0..MAX_PLACEMENT_ATTEMPTS {
            let p = [
                side * rng.random::<f64>(),
                side * rng.random::<f64>(),
                side * rng.random::<f64>(),
            ];
            if positions.iter().all(|q| distance(&p, q) >= d_min) {
                positions.push(p);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::PointCloudInfeasible { index, d_min, attempts: MAX_PLACEMENT_ATTEMPTS });
        }
    }
    Ok(PointCloud { positions, rho, lambda0, k0: 2.0 * PI / lambda0, seed })
}

/// `A_ij = (1 − δ_ij) exp(i k₀ |r_i − r_j|) / |r_i − r_j|` with the cloud's
/// own wavenumber.
pub fn build_erm(cloud: &PointCloud) -> Result<SquareComplexMatrix> {
    build_erm_with_wavenumber(cloud, cloud.k0)
}

/// Same kernel with an explicit wavenumber; `k0 = 0` gives the static `1/r`
/// kernel and a real symmetric matrix.
pub fn build_erm_with_wavenumber(cloud: &PointCloud, k0: f64) -> Result<SquareComplexMatrix> {
    if !k0.is_finite() {
        return Err(Error::InvalidParameter(format!("wavenumber {k0} must be finite")));
    }
    let n = cloud.len();
    let mut a = Mat::<c64>::zeros(n, n);
    for j in 0..n {
        for i in j + 1..n {
            let r = distance(&cloud.positions[i], &cloud.positions[j]);
            if r == 0.0 {
                return Err(Error::SingularKernel(j, i));
            }
            let (s, c) = (k0 * r).sin_cos();
            let v = c64::new(c / r, s / r);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    SquareComplexMatrix::new(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_geometry() {
        let cloud = sample_point_cloud(2, 1.0, 1.0, 3).unwrap();
        let side = 2f64.cbrt();
        assert!((cloud.side() - side).abs() < 1e-15);
        for p in &cloud.positions {
            assert!(p.iter().all(|&x| (0.0..side).contains(&x)));
        }
        assert!(cloud.min_pairwise_distance() >= cloud.d_min());
        assert!((cloud.k0 * cloud.lambda0 - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn cube_side_for_thousand_points() {
        let cloud = sample_point_cloud(1000, 8.0, 1.0, 1).unwrap();
        assert!((cloud.side() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn nearest_neighbour_median_matches_poisson() {
        // Poisson nearest-neighbour law: P(D > r) = exp(-4πρr³/3), so the
        // median is (3 ln 2 / (4πρ))^{1/3} ≈ 0.549 ρ^{-1/3}.
        let rho = 8.0;
        let cloud = sample_point_cloud(1000, rho, 0.5, 12).unwrap();
        let mut nn: Vec<f64> = cloud
            .positions
            .iter()
            .enumerate()
            .map(|(i, a)| {
                cloud
                    .positions
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, b)| distance(a, b))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        nn.sort_by(f64::total_cmp);
        let median = 0.5 * (nn[499] + nn[500]);
        let oracle = (3.0 * 2f64.ln() / (4.0 * PI * rho)).cbrt();
        assert!((median / oracle - 1.0).abs() < 0.2, "median {median}, oracle {oracle}");
    }

    #[test]
    fn infeasible_density_fails_cleanly() {
        // 50 points in a cube of side (50/1e7)^{1/3} ≈ 0.017 with d_min = 0.01
        assert!(matches!(
            sample_point_cloud(50, 1e7, 1.0, 1),
            Err(Error::PointCloudInfeasible { .. })
        ));
    }

    #[test]
    fn bad_parameters_rejected() {
        assert!(sample_point_cloud(1, 1.0, 1.0, 0).is_err());
        assert!(sample_point_cloud(5, 0.0, 1.0, 0).is_err());
        assert!(sample_point_cloud(5, 1.0, -1.0, 0).is_err());
    }

    #[test]
    fn two_point_kernel_closed_form() {
        let cloud = PointCloud {
            positions: vec![[0.0, 0.0, 0.0], [0.3, 0.4, 0.0]],
            rho: 1.0,
            lambda0: 2.0,
            k0: PI,
            seed: 0,
        };
        let a = build_erm(&cloud).unwrap();
        let e = a.entries();
        let expected = c64::new((PI * 0.5).cos(), (PI * 0.5).sin()) / 0.5;
        assert!((e[(0, 1)] - expected).norm() < 1e-15);
        assert_eq!(e[(0, 1)], e[(1, 0)]);
        assert_eq!(e[(0, 0)], c64::new(0.0, 0.0));
        assert_eq!(e[(1, 1)], c64::new(0.0, 0.0));
    }

    #[test]
    fn coincident_points_rejected() {
        let cloud = PointCloud {
            positions: vec![[1.0, 1.0, 1.0], [0.0, 0.0, 0.0], [1.0, 1.0, 1.0]],
            rho: 1.0,
            lambda0: 1.0,
            k0: 2.0 * PI,
            seed: 0,
        };
        assert!(matches!(build_erm(&cloud), Err(Error::SingularKernel(0, 2))));
    }
}
