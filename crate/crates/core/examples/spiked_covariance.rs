//! A rank-one signal detaches one eigenvalue from the MP bulk, and the top
//! eigenvector points at the signal direction.

use rmtlab::detection::mp_outlier_detector;
use rmtlab::ensembles::{sample_covariance, sample_signal_plus_noise, Field, SignalSpec};
use rmtlab::spectra::{eig_hermitian, eig_hermitian_with_vectors, mp_support, MpLaw};

fn main() -> rmtlab::Result<()> {
    let (n, samples) = (500, 500);
    let law = MpLaw::new(1.0, 1.0)?;
    let (_, edge) = mp_support(&law);
    for power in [0.5, 1.0, 2.0, 10.0, 100.0] {
        let x = sample_signal_plus_noise(n, samples, &SignalSpec::rank_one(power), 1.0, Field::Complex, 11)?;
        let w = sample_covariance(&x)?;
        let spec = eig_hermitian(&w)?.with_aspect_ratio(1.0);
        let top = spec.eigenvalues.last().unwrap().re;
        let verdict = mp_outlier_detector(&spec, &law, 0.05)?;
        let (_, u) = eig_hermitian_with_vectors(&w)?;
        // canonical direction e_0: alignment is |u_top[0]|²
        let align = u[(0, n - 1)].norm_sqr();
        // spiked-model prediction (1+p)(1+1/p) above the phase transition
        let predicted = if power > 1.0 { (1.0 + power) * (1.0 + 1.0 / power) } else { edge };
        println!(
            "p = {power:6.1}: top eigenvalue {top:8.3} (predicted {predicted:8.3}, edge {edge}), \
             alignment {align:.3}, verdict {:?}",
            verdict.verdict
        );
    }
    Ok(())
}
