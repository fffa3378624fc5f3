//! Exact distributions, seeded Monte Carlo and normality checks for the four
//! stochastic indices.

pub mod exact;
pub mod monte_carlo;
pub mod normality;

pub use exact::{exact_distribution, exact_distributions, ExactDistribution};
pub use monte_carlo::{
    block_rng, monte_carlo, sample_totals, sample_values, samples_csv, SampleStats, SamplingPlan, SAMPLE_BLOCK,
};
pub use normality::{
    ks_critical_value, ks_statistic, normal_cdf, normality_test, normality_tests, NormalityPlan, NormalityResult,
    Standardization,
};

use crate::indices::Index;
use crate::scalar::{exact, exact_int, Exact};

/// Resistance-based raw values are kept in fifths.
pub(crate) fn raw_scale(index: Index) -> i128 {
    if index.is_resistance_based() {
        5
    } else {
        1
    }
}

pub(crate) fn raw_to_exact(raw: i128, index: Index) -> Exact {
    if index.is_resistance_based() {
        exact_int(raw) / exact(5, 1)
    } else {
        exact_int(raw)
    }
}

pub(crate) fn raw_to_f64(raw: i128, index: Index) -> f64 {
    raw as f64 / raw_scale(index) as f64
}

/// Exact decimal text of a raw value: fifths always end in a single digit.
pub(crate) fn raw_to_decimal(raw: i128, index: Index) -> String {
    if !index.is_resistance_based() || raw % 5 == 0 {
        return (raw / raw_scale(index)).to_string();
    }
    let tenths = raw * 2;
    let sign = if tenths < 0 { "-" } else { "" };
    let t = tenths.abs();
    format!("{}{}.{}", sign, t / 10, t % 10)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering_is_exact() {
        assert_eq!(raw_to_decimal(6586, Index::KfStar), "1317.2");
        assert_eq!(raw_to_decimal(200, Index::KfPlus), "40");
        assert_eq!(raw_to_decimal(1694, Index::Gutman), "1694");
        assert_eq!(raw_to_decimal(-3, Index::KfStar), "-0.6");
        assert_eq!(raw_to_exact(6586, Index::KfStar), exact(6586, 5));
    }
}
