//! Known-mean Gaussian detection: likelihood-ratio statistic and deflection.
//!
//! Under equal covariances `l(y)` is Gaussian with mean 0 (H0) or `d²` (H1)
//! and variance `d²`, so the midpoint threshold gives `P_fa = Q(d/2)`.

use faer::Mat;
use rmtlab::detection::{deflection, lrt_statistic, LrtModel};
use rmtlab::ensembles::{sample_observation, Hypothesis};
use rmtlab::fbl::q_function;

const RHO: f64 = 0.6;
const SIGMA2: f64 = 0.5;

/// AR(1) noise with covariance `σ² ρ^{|i-j|}` built from white draws.
fn ar1(white: &[f64]) -> Vec<f64> {
    let innovation = (1.0 - RHO * RHO).sqrt();
    let mut out = Vec::with_capacity(white.len());
    for (i, w) in white.iter().enumerate() {
        out.push(if i == 0 { *w } else { RHO * out[i - 1] + innovation * w });
    }
    out
}

fn main() -> rmtlab::Result<()> {
    let mean = vec![1.0, 0.5, -0.5, 0.25];
    let zeros = vec![0.0; mean.len()];
    let white = LrtModel::white(mean.clone(), SIGMA2)?;
    let ar = LrtModel::new(mean.clone(), Mat::from_fn(4, 4, |i, j| SIGMA2 * RHO.powi((i as i32 - j as i32).abs())))?;

    for (name, model, coloured) in [("white", &white, false), ("AR(1)", &ar, true)] {
        let d2 = deflection(model);
        let gamma = d2 / 2.0;
        let trials = 20_000;
        let mut hits = [0usize; 2];
        for t in 0..trials {
            let x = sample_observation(&zeros, SIGMA2.sqrt(), Hypothesis::H0, t as u64)?;
            let x = if coloured { ar1(&x) } else { x };
            for (k, h) in [Hypothesis::H0, Hypothesis::H1].into_iter().enumerate() {
                let y: Vec<f64> = match h {
                    Hypothesis::H0 => x.clone(),
                    Hypothesis::H1 => x.iter().zip(&mean).map(|(a, m)| a + m).collect(),
                };
                if lrt_statistic(&y, model)? > gamma {
                    hits[k] += 1;
                }
            }
        }
        println!(
            "{name:6}: d² = {d2:.3}, theory P_fa = {:.4}, P_d = {:.4}; simulated {:.4}, {:.4}",
            q_function(d2.sqrt() / 2.0),
            1.0 - q_function(d2.sqrt() / 2.0),
            hits[0] as f64 / trials as f64,
            hits[1] as f64 / trials as f64
        );
    }
    Ok(())
}
