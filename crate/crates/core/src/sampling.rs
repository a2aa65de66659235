//! Seeded sampling of replacement numerals.
//!
//! The stream is SplitMix64 (Steele, Lea & Flood) reduced to `[lo, hi)` by
//! rejection: with `span = hi - lo`, raw outputs below `2^64 mod span` are
//! discarded and the rest map to `lo + x % span`. Every platform sees the
//! same sequence for the same seed.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::Error;

/// SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `[lo, hi)`; `lo < hi` is the caller's job.
    pub fn next_in_range(&mut self, lo: u32, hi: u32) -> u32 {
        debug_assert!(lo < hi);
        let span = u64::from(hi - lo);
        let threshold = span.wrapping_neg() % span;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return lo + (x % span) as u32;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplingConfig {
    pub eval_seed: u64,
    pub train_seed: u64,
    pub eval_count: usize,
    pub train_count: usize,
    pub oversample: usize,
    /// Inclusive lower bound.
    pub lo: u32,
    /// Exclusive upper bound.
    pub hi: u32,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            eval_seed: 7919,
            train_seed: 7907,
            eval_count: 50,
            train_count: 20,
            oversample: 100,
            lo: 1100,
            hi: 2100,
        }
    }
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.lo >= self.hi {
            return Err(Error::InvalidRange {
                lo: self.lo,
                hi: self.hi,
            });
        }
        if self.eval_count > (self.hi - self.lo) as usize {
            return Err(Error::InvalidConfig(
                "eval_count exceeds the size of the range",
            ));
        }
        Ok(())
    }
}

/// `eval_count` draws with replacement, seeded by `eval_seed`.
pub fn sample_eval_numbers(cfg: &SamplingConfig) -> Result<Vec<u32>, Error> {
    cfg.validate()?;
    let mut rng = SplitMix64::new(cfg.eval_seed);
    Ok((0..cfg.eval_count)
        .map(|_| rng.next_in_range(cfg.lo, cfg.hi))
        .collect())
}

/// Draws `oversample` values seeded by `train_seed`, drops those in
/// `exclude`, and keeps the first `train_count` survivors.
pub fn sample_training_numbers(
    cfg: &SamplingConfig,
    exclude: &BTreeSet<u32>,
) -> Result<Vec<u32>, Error> {
    cfg.validate()?;
    let mut rng = SplitMix64::new(cfg.train_seed);
    let survivors: Vec<u32> = (0..cfg.oversample)
        .map(|_| rng.next_in_range(cfg.lo, cfg.hi))
        .filter(|v| !exclude.contains(v))
        .take(cfg.train_count)
        .collect();
    if survivors.len() < cfg.train_count {
        return Err(Error::NotEnoughSurvivors {
            survivors: survivors.len(),
            wanted: cfg.train_count,
        });
    }
    Ok(survivors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_count_is_empty() {
        let cfg = SamplingConfig {
            eval_count: 0,
            ..Default::default()
        };
        assert!(sample_eval_numbers(&cfg).unwrap().is_empty());
    }

    #[test]
    fn same_seed_same_sequence() {
        let cfg = SamplingConfig::default();
        assert_eq!(
            sample_eval_numbers(&cfg).unwrap(),
            sample_eval_numbers(&cfg).unwrap()
        );
    }

    #[test]
    fn default_eval_numbers_in_range() {
        let v = sample_eval_numbers(&SamplingConfig::default()).unwrap();
        assert_eq!(v.len(), 50);
        assert!(v.iter().all(|&x| (1100..2100).contains(&x)));
    }

    #[test]
    fn empty_exclude_takes_stream_prefix() {
        let cfg = SamplingConfig::default();
        let got = sample_training_numbers(&cfg, &BTreeSet::new()).unwrap();
        let mut rng = SplitMix64::new(cfg.train_seed);
        let want: Vec<u32> = (0..cfg.train_count)
            .map(|_| rng.next_in_range(cfg.lo, cfg.hi))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn excluding_everything_fails() {
        let cfg = SamplingConfig::default();
        let all: BTreeSet<u32> = (cfg.lo..cfg.hi).collect();
        assert_eq!(
            sample_training_numbers(&cfg, &all).unwrap_err(),
            Error::NotEnoughSurvivors {
                survivors: 0,
                wanted: 20
            }
        );
    }

    #[test]
    fn training_numbers_disjoint_from_eval() {
        let cfg = SamplingConfig::default();
        let eval: BTreeSet<u32> = sample_eval_numbers(&cfg).unwrap().into_iter().collect();
        let train = sample_training_numbers(&cfg, &eval).unwrap();
        assert_eq!(train.len(), 20);
        assert!(train.iter().all(|t| !eval.contains(t)));
    }

    #[test]
    fn invalid_range() {
        let cfg = SamplingConfig {
            lo: 2100,
            hi: 1100,
            ..Default::default()
        };
        assert!(matches!(
            sample_eval_numbers(&cfg),
            Err(Error::InvalidRange { .. })
        ));
    }
}
