//! Seeded, parallel Monte Carlo over random chains.
//!
//! Samples are grouped in blocks of [`SAMPLE_BLOCK`]. Block `b` always draws
//! from ChaCha8 stream `b` of the master seed, whichever worker runs it, and
//! block results are merged in block order. The output therefore depends on
//! `(seed, samples)` only, not on the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{raw_to_decimal, raw_to_f64};
use crate::chain::{choice_count, draw_mode, AttachmentMode};
use crate::error::{Error, Result};
use crate::indices::{IncrementalEngine, Index, RawTotals};

pub const SAMPLE_BLOCK: usize = 256;

/// Streaming mean/variance (Welford) with min and max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub index: Index,
    pub seed: u64,
    pub count: u64,
    pub mean: f64,
    /// Sum of squared deviations from the mean.
    pub m2: f64,
    pub min: f64,
    pub max: f64,
}

impl SampleStats {
    pub fn new(index: Index, seed: u64) -> Self {
        SampleStats { index, seed, count: 0, mean: 0.0, m2: 0.0, min: f64::INFINITY, max: f64::NEG_INFINITY }
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    /// Pairwise combination of two partial states.
    pub fn merge(&mut self, other: &SampleStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            let (index, seed) = (self.index, self.seed);
            *self = *other;
            self.index = index;
            self.seed = seed;
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let total = na + nb;
        let delta = other.mean - self.mean;
        self.mean += delta * nb / total;
        self.m2 += other.m2 + delta * delta * na * nb / total;
        self.count += other.count;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    /// Unbiased sample variance (0 below two samples).
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn population_variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.m2 / self.count as f64
        }
    }

    /// Standard error of the mean for a given per-sample variance.
    pub fn standard_error(&self, variance: f64) -> f64 {
        (variance / self.count as f64).sqrt()
    }
}

/// What to simulate and how.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub n: usize,
    pub p1: f64,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

impl SamplingPlan {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidPentagonCount(self.n));
        }
        if !(0.0..=1.0).contains(&self.p1) {
            return Err(Error::InvalidProbability(self.p1.to_string()));
        }
        if self.samples == 0 {
            return Err(Error::EmptySample);
        }
        if self.workers == 0 {
            return Err(Error::NoWorkers);
        }
        Ok(())
    }

    fn blocks(&self) -> usize {
        self.samples.div_ceil(SAMPLE_BLOCK)
    }
}

/// Random stream of block `block` under `seed`.
pub fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

fn draw_totals(n: usize, p1: f64, rng: &mut ChaCha8Rng) -> RawTotals {
    let mut engine = IncrementalEngine::new();
    if n >= 2 {
        engine.attach(AttachmentMode::Mode1);
    }
    for _ in 0..choice_count(n) {
        engine.attach(draw_mode(p1, rng));
    }
    *engine.totals()
}

/// Runs `visit` once per block on a pool of `plan.workers` threads and
/// returns the block results in block order.
fn run_blocks<R, F>(plan: &SamplingPlan, visit: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&mut dyn Iterator<Item = RawTotals>) -> R + Sync,
{
    plan.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(plan.workers).build().map_err(|_| Error::NoWorkers)?;
    let blocks = plan.blocks();
    Ok(pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let len = SAMPLE_BLOCK.min(plan.samples - b * SAMPLE_BLOCK);
                let mut rng = block_rng(plan.seed, b);
                let mut draws = (0..len).map(|_| draw_totals(plan.n, plan.p1, &mut rng));
                visit(&mut draws)
            })
            .collect()
    }))
}

/// Sample statistics for each requested index.
pub fn monte_carlo(indices: &[Index], plan: &SamplingPlan) -> Result<Vec<SampleStats>> {
    let blocks = run_blocks(plan, |draws| {
        let mut stats = indices.iter().map(|&i| SampleStats::new(i, plan.seed)).collect::<Vec<_>>();
        for totals in draws {
            for s in stats.iter_mut() {
                s.push(raw_to_f64(totals.raw(s.index), s.index));
            }
        }
        stats
    })?;
    let mut merged = indices.iter().map(|&i| SampleStats::new(i, plan.seed)).collect::<Vec<_>>();
    for block in &blocks {
        for (m, s) in merged.iter_mut().zip(block) {
            m.merge(s);
        }
    }
    Ok(merged)
}

/// Every sampled realization's index totals, in sample order.
pub fn sample_totals(plan: &SamplingPlan) -> Result<Vec<RawTotals>> {
    Ok(run_blocks(plan, |draws| draws.collect::<Vec<_>>())?.into_iter().flatten().collect())
}

pub fn sample_values(index: Index, plan: &SamplingPlan) -> Result<Vec<f64>> {
    Ok(run_blocks(plan, |draws| draws.map(|t| raw_to_f64(t.raw(index), index)).collect::<Vec<_>>())?
        .into_iter()
        .flatten()
        .collect())
}

/// `sample_index,value` rows with exact decimal values.
pub fn samples_csv(index: Index, totals: &[RawTotals]) -> String {
    let mut out = String::from("sample_index,value\n");
    for (i, t) in totals.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i, raw_to_decimal(t.raw(index), index)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn plan(n: usize, samples: usize, workers: usize) -> SamplingPlan {
        SamplingPlan { n, p1: 0.5, samples, seed: 2024, workers }
    }

    #[test]
    fn welford_matches_two_pass() {
        let mut rng = block_rng(9, 0);
        let xs: Vec<f64> = (0..10_000).map(|_| 1000.0 + rng.random::<f64>() * 50.0).collect();
        let mut s = SampleStats::new(Index::Gutman, 9);
        xs.iter().for_each(|&x| s.push(x));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((s.mean - mean).abs() <= 1e-9 * mean.abs());
        assert!((s.variance() - var).abs() <= 1e-9 * var);
    }

    #[test]
    fn merge_equals_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64).collect();
        let mut whole = SampleStats::new(Index::Schultz, 0);
        xs.iter().for_each(|&x| whole.push(x));
        let mut left = SampleStats::new(Index::Schultz, 0);
        let mut right = SampleStats::new(Index::Schultz, 0);
        xs[..313].iter().for_each(|&x| left.push(x));
        xs[313..].iter().for_each(|&x| right.push(x));
        left.merge(&right);
        assert_eq!(left.count, whole.count);
        assert!((left.mean - whole.mean).abs() < 1e-12 * whole.mean);
        assert!((left.m2 - whole.m2).abs() < 1e-9 * whole.m2);
        assert_eq!((left.min, left.max), (whole.min, whole.max));
        let mut empty = SampleStats::new(Index::Schultz, 0);
        empty.merge(&whole);
        assert_eq!(empty, whole);
    }

    #[test]
    fn deterministic_chain_has_no_spread() {
        let stats = monte_carlo(&[Index::Gutman], &plan(2, 100, 2)).unwrap();
        assert_eq!(stats[0].count, 100);
        assert_eq!(stats[0].mean, 529.0);
        assert_eq!(stats[0].variance(), 0.0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let one = monte_carlo(&Index::ALL, &plan(12, 3000, 1)).unwrap();
        let four = monte_carlo(&Index::ALL, &plan(12, 3000, 4)).unwrap();
        assert_eq!(one, four);
        assert_eq!(sample_totals(&plan(9, 700, 1)).unwrap(), sample_totals(&plan(9, 700, 3)).unwrap());
    }

    #[test]
    fn samples_and_stats_see_the_same_draws() {
        let p = plan(7, 600, 2);
        let values = sample_values(Index::KfPlus, &p).unwrap();
        let stats = monte_carlo(&[Index::KfPlus], &p).unwrap();
        let mut s = SampleStats::new(Index::KfPlus, p.seed);
        values.iter().for_each(|&x| s.push(x));
        assert!((s.mean - stats[0].mean).abs() < 1e-9 * s.mean);
        assert_eq!(values.len(), 600);
    }

    #[test]
    fn gutman_three_mean_in_band() {
        let stats = monte_carlo(&[Index::Gutman], &plan(3, 100_000, 1)).unwrap();
        let band = 4.0 * 72.0 / (100_000f64).sqrt();
        assert!((stats[0].mean - 1766.0).abs() < band, "{}", stats[0].mean);
    }

    #[test]
    fn invalid_plans_are_rejected() {
        assert_eq!(monte_carlo(&[Index::Gutman], &plan(3, 0, 1)).unwrap_err(), Error::EmptySample);
        assert_eq!(monte_carlo(&[Index::Gutman], &plan(3, 10, 0)).unwrap_err(), Error::NoWorkers);
        assert_eq!(monte_carlo(&[Index::Gutman], &plan(0, 10, 1)).unwrap_err(), Error::InvalidPentagonCount(0));
    }

    #[test]
    fn csv_has_one_row_per_sample() {
        let p = plan(4, 5, 1);
        let csv = samples_csv(Index::KfStar, &sample_totals(&p).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "sample_index,value");
        assert_eq!(lines.len(), 6);
        assert!(lines[1].starts_with("0,"));
    }
}
