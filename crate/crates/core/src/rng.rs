//! Deterministic random substreams.
//!
//! Streams are keyed by a tuple of small integers so that a given trial draws
//! the same numbers regardless of thread scheduling or of which other trials
//! run. Rate matching relies on this for common random numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type TrialRng = ChaCha8Rng;

/// What a substream is used for. Keeps data and noise draws independent so
/// changing the message length does not perturb the noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Data = 1,
    Noise = 2,
    Design = 3,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Substream for `(seed, purpose, key...)`.
pub fn substream(seed: u64, purpose: Purpose, key: &[u64]) -> TrialRng {
    let mut h = splitmix(seed ^ (purpose as u64).rotate_left(56));
    for &k in key {
        h = splitmix(h ^ k);
    }
    ChaCha8Rng::seed_from_u64(h)
}

pub fn gaussian(rng: &mut TrialRng) -> f64 {
    StandardNormal.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn keys_separate_streams() {
        let a: u64 = substream(7, Purpose::Data, &[0, 1]).random();
        let b: u64 = substream(7, Purpose::Data, &[1, 0]).random();
        let c: u64 = substream(7, Purpose::Noise, &[0, 1]).random();
        let a2: u64 = substream(7, Purpose::Data, &[0, 1]).random();
        assert_eq!(a, a2);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}
