//! Sample-covariance eigenvalues of pure noise against the Marchenko–Pastur law.
//!
//! `cargo run --release --example marchenko_pastur -- [n] [N]`

use rmtlab::ensembles::{sample_covariance, sample_gaussian_matrix, Field};
use rmtlab::spectra::{eig_hermitian, esd_histogram, ks_statistic, mp_bin_average, mp_cdf, mp_support, Bins, MpLaw};

fn main() -> rmtlab::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(1000);
    let samples = args.get(1).copied().unwrap_or(n);

    let x = sample_gaussian_matrix(n, samples, 1.0, Field::Complex, 7)?;
    let spec = eig_hermitian(&sample_covariance(&x)?)?.with_aspect_ratio(x.aspect_ratio());
    let law = MpLaw::new(x.aspect_ratio(), 1.0)?;
    let (a, b) = mp_support(&law);

    let values = spec.real_parts();
    let ks = ks_statistic(&values, |v| mp_cdf(v, &law).unwrap());
    let hist = esd_histogram(&spec, Bins::Auto)?;
    let sup = hist.sup_deviation(|lo, hi| mp_bin_average(lo, hi, &law))?;

    println!("n = {n}, N = {samples}, c = {:.3}", x.aspect_ratio());
    println!("MP support [{a:.4}, {b:.4}], observed [{:.4}, {:.4}]", values[0], values[values.len() - 1]);
    println!("KS distance to MP CDF: {ks:.4}");
    println!("sup |histogram - MP| over {} bins: {sup:.4}", hist.bins());
    for (lo, hi, mass) in hist.rows().step_by((hist.bins() / 8).max(1)) {
        let bar = "#".repeat((mass * 40.0) as usize);
        println!("{lo:7.3} .. {hi:7.3} {bar}");
    }
    Ok(())
}
