//! Eigenvalue moduli of products of k Ginibre matrices follow r^{2/k}.

use rmtlab::spectra::{ginibre_product_radial_cdf, ginibre_product_spectrum, ks_statistic, quantile};

fn main() -> rmtlab::Result<()> {
    let n = 400;
    for k in 1..=4 {
        let spec = ginibre_product_spectrum(k, n, 5)?;
        let radii = spec.sorted_moduli();
        let ks = ks_statistic(&radii, |r| ginibre_product_radial_cdf(r, k));
        let median = quantile(&radii, 0.5);
        println!(
            "k = {k}: KS {ks:.4}, median |λ| {median:.3} (law {:.3}), spectral radius {:.3}",
            0.5f64.powf(k as f64 / 2.0),
            spec.spectral_radius()
        );
    }
    Ok(())
}
