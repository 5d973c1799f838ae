//! Normal-approximation rates and the blocklength needed to reach a rate.

use rmtlab::fbl::{awgn_channel, blocklength_for_rate, normal_approx_rate, q_inverse};

fn main() -> rmtlab::Result<()> {
    let ch = awgn_channel(1.0)?;
    println!("AWGN at SNR 0 dB: C = {:.4} bit, V = {:.4} bit²", ch.capacity, ch.dispersion);
    for eps in [1e-1, 1e-3, 1e-6] {
        println!("ε = {eps:.0e}: Q⁻¹(ε) = {:.4}", q_inverse(eps)?);
        for n in [100u64, 1_000, 10_000, 100_000] {
            let r = normal_approx_rate(&ch, eps, n)?;
            println!("  n = {n:6}: R = {r:.4} ({:.1}% of C)", 100.0 * r / ch.capacity);
        }
        let n = blocklength_for_rate(&ch, eps, 0.9 * ch.capacity)?;
        println!("  90% of capacity needs n >= {n}");
    }
    Ok(())
}
