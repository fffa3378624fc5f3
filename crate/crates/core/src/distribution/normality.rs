//! One-sample Kolmogorov-Smirnov distance to the standard normal.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::monte_carlo::{sample_totals, SamplingPlan};
use super::raw_to_f64;
use crate::closed_forms::{expected_index_with, variance_index_with, Formula};
use crate::error::{Error, Result};
use crate::indices::Index;

/// Asymptotic two-sided critical values `c(alpha)`; the test threshold is
/// `c(alpha) / sqrt(m)`.
pub const KS_CRITICAL: [(f64, f64); 2] = [(0.01, 1.628), (0.05, 1.358)];

pub fn ks_critical_value(alpha: f64) -> Result<f64> {
    KS_CRITICAL.iter().find(|(a, _)| (a - alpha).abs() < 1e-12).map(|&(_, c)| c).ok_or(Error::UnsupportedAlpha(alpha))
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// `sup |F_m - Φ|` of already standardized values; sorts `z` in place.
pub fn ks_statistic(z: &mut [f64]) -> f64 {
    z.sort_by(f64::total_cmp);
    let m = z.len() as f64;
    z.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let phi = normal_cdf(x);
        let above = (i + 1) as f64 / m - phi;
        let below = phi - i as f64 / m;
        d.max(above).max(below)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Standardization {
    /// Closed-form mean and variance.
    ClosedForm,
    /// Sample mean and unbiased sample variance.
    SampleMoments,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalityPlan {
    pub sampling: SamplingPlan,
    pub standardization: Standardization,
    /// Closed-form table used with [`Standardization::ClosedForm`].
    pub formula: Formula,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityResult {
    pub index: Index,
    pub n: usize,
    pub p1: f64,
    pub m: usize,
    pub seed: u64,
    pub ks_statistic: f64,
    pub alpha: f64,
    pub threshold: f64,
    pub passed: bool,
    pub standardization: Standardization,
    pub formula: Formula,
    /// Mean and standard deviation used to standardize.
    pub center: f64,
    pub scale: f64,
}

impl NormalityResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }
}

fn check(plan: &NormalityPlan) -> Result<f64> {
    let c = ks_critical_value(plan.alpha)?;
    plan.sampling.validate()?;
    let s = &plan.sampling;
    if s.n <= 2 || s.p1 <= 0.0 || s.p1 >= 1.0 {
        return Err(Error::DegenerateVariance { n: s.n, p1: s.p1 });
    }
    Ok(c)
}

/// KS results for several indices over one shared set of samples.
pub fn normality_tests(indices: &[Index], plan: &NormalityPlan) -> Result<Vec<NormalityResult>> {
    let c = check(plan)?;
    let s = plan.sampling;
    let totals = sample_totals(&s)?;
    let m = totals.len();
    let threshold = c / (m as f64).sqrt();
    Ok(indices
        .iter()
        .map(|&index| {
            let mut values: Vec<f64> = totals.iter().map(|t| raw_to_f64(t.raw(index), index)).collect();
            let (center, scale) = match plan.standardization {
                Standardization::ClosedForm => (
                    expected_index_with(plan.formula, index, s.n, &s.p1),
                    variance_index_with(plan.formula, index, s.n, &s.p1).sqrt(),
                ),
                Standardization::SampleMoments => {
                    let mean = values.iter().sum::<f64>() / m as f64;
                    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m.max(2) - 1) as f64;
                    (mean, var.sqrt())
                }
            };
            values.iter_mut().for_each(|x| *x = (*x - center) / scale);
            let ks = ks_statistic(&mut values);
            NormalityResult {
                index,
                n: s.n,
                p1: s.p1,
                m,
                seed: s.seed,
                ks_statistic: ks,
                alpha: plan.alpha,
                threshold,
                passed: ks < threshold,
                standardization: plan.standardization,
                formula: plan.formula,
                center,
                scale,
            }
        })
        .collect())
}

pub fn normality_test(index: Index, plan: &NormalityPlan) -> Result<NormalityResult> {
    Ok(normality_tests(&[index], plan)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(n: usize, samples: usize) -> NormalityPlan {
        NormalityPlan {
            sampling: SamplingPlan { n, p1: 0.5, samples, seed: 11, workers: 1 },
            standardization: Standardization::ClosedForm,
            formula: Formula::Published,
            alpha: 0.01,
        }
    }

    #[test]
    fn cdf_reference_points() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        // statrs' erfc is good to roughly 1e-11.
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-10);
        assert!((normal_cdf(-1.0) - 0.15865525393145707).abs() < 1e-10);
    }

    #[test]
    fn ks_of_known_sets() {
        assert!((ks_statistic(&mut [0.0]) - 0.5).abs() < 1e-15);
        // Two atoms at -1 and 1 with mass 1/2 each.
        let mut two = vec![-1.0, 1.0, -1.0, 1.0];
        let expect = 0.5 - normal_cdf(-1.0);
        assert!((ks_statistic(&mut two) - expect).abs() < 1e-12);
        // Quantiles at (i - 1/2)/m give the minimal distance 1/(2m).
        let m = 200;
        let mut q: Vec<f64> = (0..m)
            .map(|i| {
                let target = (i as f64 + 0.5) / m as f64;
                let (mut lo, mut hi) = (-10.0, 10.0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if normal_cdf(mid) < target {
                        lo = mid
                    } else {
                        hi = mid
                    }
                }
                lo
            })
            .collect();
        assert!((ks_statistic(&mut q) - 0.5 / m as f64).abs() < 1e-9);
    }

    #[test]
    fn critical_values() {
        assert_eq!(ks_critical_value(0.01).unwrap(), 1.628);
        assert_eq!(ks_critical_value(0.05).unwrap(), 1.358);
        assert_eq!(ks_critical_value(0.1).unwrap_err(), Error::UnsupportedAlpha(0.1));
    }

    #[test]
    fn two_point_law_is_far_from_normal() {
        let r = normality_test(Index::Gutman, &plan(3, 2000)).unwrap();
        assert!(r.ks_statistic >= 0.3, "{}", r.ks_statistic);
        assert!(!r.passed);
    }

    #[test]
    fn degenerate_inputs_are_refused() {
        assert!(matches!(normality_test(Index::Gutman, &plan(2, 100)), Err(Error::DegenerateVariance { .. })));
        let mut p = plan(10, 100);
        p.sampling.p1 = 1.0;
        assert!(matches!(normality_test(Index::Gutman, &p), Err(Error::DegenerateVariance { .. })));
    }

    #[test]
    fn result_json_round_trips() {
        let r = normality_test(Index::KfPlus, &plan(6, 300)).unwrap();
        let back: NormalityResult = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_json().contains("\"standardization\":\"closed_form\""));
    }
}
