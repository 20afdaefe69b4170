//! Deterministic, counter-based pseudorandomness for Monte Carlo sampling.
//!
//! The generator is the splitmix64 finalizer applied to
//! `seed + (ctr + 1) * GOLDEN`, which makes position `ctr` of a stream
//! addressable directly — samples can be drawn in parallel or out of order
//! and the stream still reproduces bit-for-bit. Stream position `ctr`
//! equals output `ctr + 1` of the conventional sequential splitmix64
//! started from `seed`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer: a bijective avalanche mix on u64.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The u64 at position `ctr` (0-based) of the stream for `seed`.
pub fn at(seed: u64, ctr: u64) -> u64 {
    mix64(seed.wrapping_add(ctr.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// A positioned view of one stream; `next` walks it sequentially.
#[derive(Clone, Copy, Debug)]
pub struct CounterRng {
    seed: u64,
    ctr: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed, ctr: 0 }
    }

    /// Start at an arbitrary position — used to give worker `i` the
    /// disjoint block `[i * block, (i+1) * block)`.
    pub fn at_position(seed: u64, ctr: u64) -> Self {
        CounterRng { seed, ctr }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = at(self.seed, self.ctr);
        self.ctr += 1;
        v
    }
}

/// Draws an index from a fixed discrete distribution using exact cutoffs:
/// bucket `i` wins iff the raw u64 lies in `[cuts[i-1], cuts[i])` with
/// `cuts[i] = floor(2^64 * (w_0 + ... + w_i))`. No floating point is
/// involved, so sampled frequencies are exact to within 2^-64 per bucket.
pub struct ThresholdSampler {
    // cumulative cutoffs for buckets 0 .. k-2; the last bucket is the
    // complement, so a length-k distribution stores k-1 cutoffs
    cuts: Vec<u64>,
}

impl ThresholdSampler {
    /// `weights` must be non-negative rationals summing to exactly 1.
    pub fn new(weights: &[BigRational]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Argument("empty weight vector".into()));
        }
        let total: BigRational = weights.iter().cloned().sum();
        if !total.is_one() {
            return Err(Error::Argument(format!(
                "weights sum to {total}, expected exactly 1"
            )));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Argument("negative weight".into()));
        }
        let two64 = BigInt::one() << 64;
        let mut cum = BigRational::zero();
        let mut cuts = Vec::with_capacity(weights.len() - 1);
        for w in &weights[..weights.len() - 1] {
            cum += w;
            // floor(cum * 2^64); cum >= 0 so truncation is floor
            let scaled: BigInt = (cum.numer() * &two64) / cum.denom();
            let cut = scaled
                .to_u64()
                .ok_or_else(|| Error::Argument("cumulative weight exceeds 1".into()))?;
            cuts.push(cut);
        }
        Ok(ThresholdSampler { cuts })
    }

    pub fn len(&self) -> usize {
        self.cuts.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Maps a raw u64 draw to a bucket index.
    pub fn sample(&self, raw: u64) -> usize {
        self.cuts.partition_point(|&c| c <= raw)
    }
}
