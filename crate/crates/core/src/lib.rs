//! Random pentagonal chains and their distance/resistance indices.
//!
//! A chain `PG_n` is `n` pentagons joined in a path by single bridges; from
//! the third pentagon on, each new bridge leaves the previous pentagon at a
//! vertex chosen at random between two attachment modes. This crate builds
//! those chains, computes the Wiener, Gutman, Schultz, Kirchhoff and the two
//! degree-Kirchhoff indices with three independent engines, evaluates closed
//! forms for the moments of the four stochastic indices, and checks them
//! against exact enumeration and seeded Monte Carlo.

pub mod chain;
pub mod closed_forms;
pub mod distribution;
pub mod error;
pub mod indices;
pub mod metrics;
pub mod scalar;

pub use chain::{
    build_graph, enumerate_blueprints, sample_blueprint, AttachmentMode, ChainBlueprint, PentagonChainGraph,
    ProbabilityParams,
};
pub use closed_forms::{
    expected_index, moment_params, moment_report, sequence_values, variance_index, Formula, MomentParams, MomentReport,
};
pub use distribution::{
    exact_distribution, monte_carlo, normality_test, ExactDistribution, NormalityResult, SampleStats, SamplingPlan,
};
pub use error::{Error, Result};
pub use indices::{compute_indices, incremental_indices, Index, IndexBundle};
pub use metrics::{bfs_all_pairs, laplacian_resistance, structured_metrics, MetricKind, MetricMatrix};
pub use scalar::{Exact, Scalar};

/// Exact rational with an `i128` numerator and denominator.
pub type Rational128 = num_rational::Ratio<i128>;

/// Index values in exact rational arithmetic.
pub type ExactBundle = IndexBundle<Exact>;
/// Index values in double precision.
pub type FloatBundle = IndexBundle<f64>;
/// Resistance matrix from the exact structured engine.
pub type ExactResistance = MetricMatrix<Exact>;
/// Resistance matrix from the floating-point Laplacian engine.
pub type FloatResistance = MetricMatrix<f64>;
/// Shortest-path distance matrix.
pub type DistanceMatrix = MetricMatrix<u32>;
/// Probability parameters in exact mode.
pub type ExactProbability = ProbabilityParams<Exact>;
/// Probability parameters in floating-point mode.
pub type FloatProbability = ProbabilityParams<f64>;

/// Exact index distribution over all realizations.
pub type ExactIndexDistribution = ExactDistribution<Exact>;
/// Moment parameters in exact arithmetic.
pub type ExactMomentParams = MomentParams<Exact>;
pub type FloatMomentParams = MomentParams<f64>;
