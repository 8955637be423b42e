//! Deterministic per-trial random streams and summary statistics.
//!
//! Seed derivation (version 1): a trial's generator is
//! `ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(lane)))` with the
//! ChaCha stream id set to the trial index. `lane` separates independent
//! experiment arms (for example one lane per shaping order). Streams depend
//! only on `(seed, lane, trial)`, so trials can run in any order or in
//! parallel.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SstError};
use crate::model::{SourceEnsemble, SymbolString};

pub const SEED_DERIVATION_VERSION: u32 = 1;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64, lane: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(lane)));
    rng.set_stream(trial);
    rng
}

/// Draws i.i.d. strings from a memoryless source.
#[derive(Clone, Debug)]
pub struct StringSampler {
    src: SourceEnsemble,
    dist: WeightedIndex<f64>,
}

impl StringSampler {
    pub fn new(src: &SourceEnsemble) -> Result<Self> {
        let dist = WeightedIndex::new(src.probs().iter().copied())
            .map_err(|e| SstError::InvalidSource(e.to_string()))?;
        Ok(StringSampler {
            src: src.clone(),
            dist,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> SymbolString {
        let symbols = (0..n).map(|_| self.dist.sample(rng) as u32).collect();
        SymbolString::from_trusted(self.src.alphabet(), symbols)
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (low, high)
}

/// z for a two-sided 95% interval.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Rounds to six significant digits, the precision of every report.
pub fn round_sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

pub(crate) fn serialize_sig6<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig6(*x))
}
