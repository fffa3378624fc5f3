//! Exhaustive enumeration of index distributions.
//!
//! The recurrence engine is walked depth-first over the binary tree of
//! attachment choices, so each realization costs O(1) amortized. Values are
//! tallied under their exact raw key together with the realization's Mode1
//! count; probabilities are only formed at the end, which keeps the walk
//! independent of `p1`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::raw_to_exact;
use crate::chain::{build_graph, choice_count, mode_weights, AttachmentMode, ChainBlueprint, ProbabilityParams};
use crate::error::{Error, Result};
use crate::indices::{compute_indices, incremental_indices, IncrementalEngine, Index};
use crate::metrics::structured_metrics;
use crate::scalar::{Exact, Scalar};

/// Raw value -> realization count per Mode1 count.
type Tally = BTreeMap<i128, Vec<u64>>;

/// Top levels of the choice tree handed out as parallel work items.
const PREFIX_BITS: usize = 6;

/// Chains up to this size get their uniform realizations re-checked against
/// the matrix engines before a distribution is returned.
const SPOT_CHECK_MAX: usize = 12;

/// Distribution of one index over all realizations of `PG_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution<T> {
    pub index: Index,
    pub n: usize,
    pub p1: T,
    /// Distinct values with positive probability, ascending.
    pub support: Vec<(Exact, T)>,
    pub mean: T,
    pub variance: T,
}

impl<T: Scalar> ExactDistribution<T> {
    pub fn total_probability(&self) -> T {
        self.support.iter().fold(T::zero(), |acc, (_, p)| acc + p.clone())
    }

    /// `value,probability` rows; exact types print as `"p/q"`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,probability\n");
        for (v, p) in &self.support {
            out.push_str(&format!("{}/{},{}\n", v.numer(), v.denom(), p.to_text()));
        }
        out
    }
}

fn tally_leaves(engine: IncrementalEngine, remaining: usize, mode1: usize, steps: usize, tallies: &mut [Tally; 4]) {
    if remaining == 0 {
        let totals = engine.totals();
        for (slot, &index) in Index::ALL.iter().enumerate() {
            tallies[slot].entry(totals.raw(index)).or_insert_with(|| vec![0; steps + 1])[mode1] += 1;
        }
        return;
    }
    let mut left = engine.clone();
    left.attach(AttachmentMode::Mode1);
    tally_leaves(left, remaining - 1, mode1 + 1, steps, tallies);
    let mut right = engine;
    right.attach(AttachmentMode::Mode2);
    tally_leaves(right, remaining - 1, mode1, steps, tallies);
}

fn merge_tallies(mut a: [Tally; 4], b: [Tally; 4]) -> [Tally; 4] {
    for (into, from) in a.iter_mut().zip(b) {
        for (value, counts) in from {
            let slot = into.entry(value).or_insert_with(|| vec![0; counts.len()]);
            for (x, y) in slot.iter_mut().zip(counts) {
                *x += y;
            }
        }
    }
    a
}

fn enumerate_tallies(n: usize, cap: usize) -> Result<[Tally; 4]> {
    if n == 0 {
        return Err(Error::InvalidPentagonCount(n));
    }
    if n > cap {
        return Err(Error::EnumerationCapExceeded { n, cap });
    }
    let steps = choice_count(n);
    let mut root = IncrementalEngine::new();
    if n >= 2 {
        root.attach(AttachmentMode::Mode1);
    }
    let prefix = steps.min(PREFIX_BITS);
    let tallies = (0..1u64 << prefix)
        .into_par_iter()
        .map(|code| {
            let mut engine = root.clone();
            let mut mode1 = 0;
            for i in 0..prefix {
                if (code >> (prefix - 1 - i)) & 1 == 0 {
                    engine.attach(AttachmentMode::Mode1);
                    mode1 += 1;
                } else {
                    engine.attach(AttachmentMode::Mode2);
                }
            }
            let mut local: [Tally; 4] = Default::default();
            tally_leaves(engine, steps - prefix, mode1, steps, &mut local);
            local
        })
        .reduce(Default::default, merge_tallies);
    Ok(tallies)
}

fn spot_check(n: usize) -> Result<()> {
    if n > SPOT_CHECK_MAX {
        return Ok(());
    }
    for mode in [AttachmentMode::Mode1, AttachmentMode::Mode2] {
        let bp = ChainBlueprint::uniform(n, mode)?;
        let g = build_graph(&bp);
        let (dist, res) = structured_metrics::<Exact>(&bp);
        let matrix = compute_indices(&g, &dist, &res)?;
        let fast = incremental_indices::<Exact>(&bp);
        if matrix != fast {
            return Err(Error::EngineDisagreement(format!(
                "blueprint {}: matrix {:?} vs recurrence {:?}",
                bp.to_json(),
                matrix,
                fast
            )));
        }
    }
    Ok(())
}

fn build_distribution<T: Scalar>(
    index: Index,
    n: usize,
    p: &ProbabilityParams<T>,
    tally: Tally,
) -> ExactDistribution<T> {
    let weights = mode_weights(choice_count(n), p);
    let mut support = Vec::with_capacity(tally.len());
    for (raw, counts) in tally {
        let prob = counts
            .iter()
            .zip(&weights)
            .filter(|(&c, _)| c > 0)
            .fold(T::zero(), |acc, (&c, w)| acc + T::from_u64(c) * w.clone());
        if !prob.is_zero() {
            support.push((raw_to_exact(raw, index), prob));
        }
    }
    let values: Vec<T> = support.iter().map(|(v, _)| T::from_exact(v)).collect();
    let mean = values.iter().zip(&support).fold(T::zero(), |acc, (v, (_, p))| acc + v.clone() * p.clone());
    let variance = values.iter().zip(&support).fold(T::zero(), |acc, (v, (_, p))| {
        let dev = v.clone() - mean.clone();
        acc + dev.clone() * dev * p.clone()
    });
    ExactDistribution { index, n, p1: p.p1().clone(), support, mean, variance }
}

/// Distributions of all four stochastic indices, in [`Index::ALL`] order.
pub fn exact_distributions<T: Scalar>(
    n: usize,
    p: &ProbabilityParams<T>,
    cap: usize,
) -> Result<Vec<ExactDistribution<T>>> {
    let tallies = enumerate_tallies(n, cap)?;
    spot_check(n)?;
    Ok(Index::ALL.iter().zip(tallies).map(|(&index, tally)| build_distribution(index, n, p, tally)).collect())
}

pub fn exact_distribution<T: Scalar>(
    index: Index,
    n: usize,
    p: &ProbabilityParams<T>,
    cap: usize,
) -> Result<ExactDistribution<T>> {
    let slot = Index::ALL.iter().position(|&i| i == index).expect("index listed");
    Ok(exact_distributions(n, p, cap)?.swap_remove(slot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::enumerate_blueprints;
    use crate::scalar::{exact, exact_int};
    use num_traits::{One, Zero};

    fn half() -> ProbabilityParams<Exact> {
        ProbabilityParams::new(exact(1, 2)).unwrap()
    }

    #[test]
    fn gutman_three_is_two_atoms() {
        let d = exact_distribution(Index::Gutman, 3, &half(), 22).unwrap();
        assert_eq!(d.support, vec![(exact_int(1694), exact(1, 2)), (exact_int(1838), exact(1, 2))]);
        assert_eq!(d.mean, exact_int(1766));
        assert_eq!(d.variance, exact_int(5184));
    }

    #[test]
    fn deterministic_chains_are_atoms() {
        let p = ProbabilityParams::new(exact(3, 10)).unwrap();
        let g2 = exact_distribution(Index::Gutman, 2, &p, 22).unwrap();
        assert_eq!(g2.support, vec![(exact_int(529), Exact::one())]);
        assert!(g2.variance.is_zero());
        let k1 = exact_distribution(Index::KfPlus, 1, &p, 22).unwrap();
        assert_eq!(k1.support, vec![(exact_int(40), Exact::one())]);
    }

    #[test]
    fn matches_naive_enumeration() {
        let p = ProbabilityParams::new(exact(1, 5)).unwrap();
        for n in 1..=7 {
            let dists = exact_distributions(n, &p, 22).unwrap();
            for (slot, &index) in Index::ALL.iter().enumerate() {
                let mut mean = Exact::zero();
                let mut second = Exact::zero();
                for (bp, w) in enumerate_blueprints(n, &p, 22).unwrap() {
                    let v = incremental_indices::<Exact>(&bp).get(index).clone();
                    mean += v.clone() * w.clone();
                    second += v.clone() * v * w;
                }
                assert_eq!(dists[slot].total_probability(), Exact::one());
                assert_eq!(dists[slot].mean, mean, "{} n={}", index, n);
                assert_eq!(dists[slot].variance, second - mean.clone() * mean, "{} n={}", index, n);
            }
        }
    }

    #[test]
    fn zero_probability_atoms_are_dropped() {
        let p = ProbabilityParams::new(Exact::zero()).unwrap();
        let d = exact_distribution(Index::Schultz, 6, &p, 22).unwrap();
        assert_eq!(d.support.len(), 1);
        let only = incremental_indices::<Exact>(&ChainBlueprint::uniform(6, AttachmentMode::Mode2).unwrap());
        assert_eq!(d.support[0].0, only.schultz);
    }

    #[test]
    fn float_mode_tracks_exact_mode() {
        let exact_d = exact_distribution(Index::KfStar, 8, &ProbabilityParams::new(exact(4, 5)).unwrap(), 22).unwrap();
        let float_d = exact_distribution(Index::KfStar, 8, &ProbabilityParams::new(0.8f64).unwrap(), 22).unwrap();
        assert!((float_d.mean - exact_d.mean.to_f64()).abs() < 1e-9 * exact_d.mean.to_f64());
        assert!((float_d.variance - exact_d.variance.to_f64()).abs() < 1e-9 * exact_d.variance.to_f64());
        assert!((float_d.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            exact_distribution(Index::Gutman, 9, &half(), 8).unwrap_err(),
            Error::EnumerationCapExceeded { n: 9, cap: 8 }
        );
    }

    #[test]
    fn csv_uses_rationals() {
        let d = exact_distribution(Index::KfStar, 3, &half(), 22).unwrap();
        let csv = d.to_csv();
        assert!(csv.starts_with("value,probability\n"));
        assert!(csv.contains("6586/5,1/2"));
    }
}
