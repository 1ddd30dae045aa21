//! Reproducible random streams and i.i.d. sampling.
//!
//! The generator is ChaCha8 (`rand_chacha`), keyed from a 64-bit seed by four
//! rounds of SplitMix64. Replication `k` of an experiment with seed `s` uses
//! the stream keyed by [`stream_seed`]`(s, k)`. Draws are made by inverse CDF
//! over the support in canonical order: rational measures draw an integer
//! uniformly below the total multiplicity (by rejection), real measures
//! compare a 53-bit uniform in `[0, 1)` against the cumulative weights. None
//! of this depends on the platform or on `rand`'s distribution code.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{domain, Result};
use crate::metric::{DiscreteMeasure, PointId, Sample, Weights};

/// One step of SplitMix64.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the stream used by replication `k`.
pub fn stream_seed(seed: u64, k: u64) -> u64 {
    let mut s = seed;
    let a = splitmix64(&mut s);
    let mut t = a ^ k.wrapping_mul(0xD1B5_4A32_D192_ED03);
    splitmix64(&mut t)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Uniform integer in `0..bound`.
fn uniform_below(rng: &mut impl RngCore, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let limit = (u64::MAX / bound) * bound;
    loop {
        let x = rng.next_u64();
        if x < limit {
            return x % bound;
        }
    }
}

/// Inverse-CDF sampler for a [`DiscreteMeasure`].
#[derive(Clone, Debug)]
pub struct Sampler {
    support: Vec<PointId>,
    table: Table,
}

#[derive(Clone, Debug)]
enum Table {
    Integer { cumulative: Vec<u64>, total: u64 },
    Real(Vec<f64>),
}

impl Sampler {
    pub fn new(mu: &DiscreteMeasure) -> Self {
        let table = match mu.weights() {
            Weights::Counts { counts, total } => Table::Integer {
                cumulative: counts
                    .iter()
                    .scan(0u64, |acc, &c| {
                        *acc += c;
                        Some(*acc)
                    })
                    .collect(),
                total: *total,
            },
            Weights::Real(w) => Table::Real(
                w.iter()
                    .scan(0.0, |acc, &x| {
                        *acc += x;
                        Some(*acc)
                    })
                    .collect(),
            ),
        };
        Self {
            support: mu.support().to_vec(),
            table,
        }
    }

    /// Index into the support of one draw.
    pub fn draw_index(&self, rng: &mut impl RngCore) -> usize {
        match &self.table {
            Table::Integer { cumulative, total } => {
                let u = uniform_below(rng, *total);
                cumulative.partition_point(|&c| c <= u)
            }
            Table::Real(cumulative) => {
                let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                cumulative
                    .partition_point(|&c| c <= u)
                    .min(cumulative.len() - 1)
            }
        }
    }

    pub fn draw(&self, rng: &mut impl RngCore) -> PointId {
        self.support[self.draw_index(rng)]
    }

    pub fn support(&self) -> &[PointId] {
        &self.support
    }
}

/// `n` i.i.d. draws from `mu`.
pub fn sample_iid(mu: &DiscreteMeasure, n: usize, seed: u64) -> Result<Sample> {
    if n == 0 {
        return Err(domain("sample size must be positive"));
    }
    let sampler = Sampler::new(mu);
    let mut rng = seeded_rng(seed);
    Sample::new((0..n).map(|_| sampler.draw(&mut rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_gives_copies() {
        let s = sample_iid(&DiscreteMeasure::dirac(PointId(4)), 7, 1).unwrap();
        assert_eq!(s.items(), &[PointId(4); 7]);
        assert!(sample_iid(&DiscreteMeasure::dirac(PointId(4)), 0, 1).is_err());
    }

    #[test]
    fn frozen_fixture_seed_42() {
        let mu = DiscreteMeasure::uniform([PointId(0), PointId(200)]).unwrap();
        let s = sample_iid(&mu, 5, 42).unwrap();
        // Recorded on first run; guards against silent stream changes.
        let frozen: Vec<usize> = FROZEN_SEED_42.to_vec();
        assert_eq!(s.items().iter().map(|p| p.0).collect::<Vec<_>>(), frozen);
    }

    const FROZEN_SEED_42: [usize; 5] = [0, 200, 200, 0, 200];

    #[test]
    fn two_point_frequency() {
        let mu = DiscreteMeasure::uniform([PointId(0), PointId(1)]).unwrap();
        for seed in [1u64, 2, 3] {
            let s = sample_iid(&mu, 100_000, seed).unwrap();
            let ones = s.items().iter().filter(|p| p.0 == 1).count() as f64 / 1e5;
            assert!((0.49..=0.51).contains(&ones), "seed {seed}: {ones}");
        }
    }

    #[test]
    fn real_weights_sample() {
        let mu = DiscreteMeasure::from_weights([(PointId(0), 0.25), (PointId(1), 0.75)]).unwrap();
        let s = sample_iid(&mu, 40_000, 9).unwrap();
        let ones = s.items().iter().filter(|p| p.0 == 1).count() as f64 / 4e4;
        assert!((ones - 0.75).abs() < 0.015, "{ones}");
    }

    #[test]
    fn streams_differ_and_repeat() {
        assert_ne!(stream_seed(42, 0), stream_seed(42, 1));
        assert_eq!(stream_seed(42, 3), stream_seed(42, 3));
        let mut a = seeded_rng(5);
        let mut b = seeded_rng(5);
        assert_eq!(a.next_u64(), b.next_u64());
    }
}
