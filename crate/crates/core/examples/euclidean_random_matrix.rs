//! Euclidean random matrices at a sparse and a dense user density.

use rmtlab::ensembles::{build_erm, build_erm_with_wavenumber, sample_point_cloud};
use rmtlab::spectra::{eig_general, ks_statistic_2d};

fn main() -> rmtlab::Result<()> {
    let (points, lambda0) = (300, 1.0f64);
    let mut clouds = Vec::new();
    for density in [0.01, 1.0] {
        let cloud = sample_point_cloud(points, density / lambda0.powi(3), lambda0, 3)?;
        let spec = eig_general(&build_erm(&cloud)?)?;
        println!(
            "ρλ₀³ = {density}: cube side {:.2} m, min distance {:.3} m, spectral radius {:.3}",
            cloud.side(),
            cloud.min_pairwise_distance(),
            spec.spectral_radius()
        );
        let static_spec = eig_general(&build_erm_with_wavenumber(&cloud, 0.0)?)?;
        println!("  k₀ = 0: max |Im λ| / radius = {:.1e}", static_spec.max_abs_imag() / static_spec.spectral_radius());
        clouds.push(spec.eigenvalues.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>());
    }
    println!("2D KS between the two eigenvalue clouds: {:.3}", ks_statistic_2d(&clouds[0], &clouds[1]));
    Ok(())
}
