//! Seed derivation for reproducible, schedule-independent Monte Carlo.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded with a
//! value derived from `(master_seed, trial_index, stream)`. Trials therefore
//! never share generator state and can run on any number of workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named sub-streams so that distinct random ingredients of one trial never
/// collide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Stream {
    Noise = 1,
    Signal = 2,
    Haar = 3,
    Ginibre = 4,
    PointCloud = 5,
    HypothesisH0 = 6,
    HypothesisH1 = 7,
    Factor = 8,
    Calibration = 9,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finaliser.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed, a trial index and a stream id into a child seed.
pub fn derive_seed(master: u64, trial: u64, stream: Stream) -> u64 {
    let a = splitmix64(master);
    let b = splitmix64(a ^ trial.wrapping_mul(GOLDEN));
    splitmix64(b ^ (stream as u64).rotate_left(32))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn derived_seeds_are_distinct_across_trials_and_streams() {
        let mut seen = HashSet::new();
        for trial in 0..1000 {
            for stream in [Stream::Noise, Stream::Signal, Stream::Haar] {
                assert!(seen.insert(derive_seed(7, trial, stream)));
            }
        }
    }

    #[test]
    fn derivation_is_pure() {
        assert_eq!(
            derive_seed(42, 3, Stream::Noise),
            derive_seed(42, 3, Stream::Noise)
        );
        assert_ne!(
            derive_seed(42, 3, Stream::Noise),
            derive_seed(43, 3, Stream::Noise)
        );
    }
}
