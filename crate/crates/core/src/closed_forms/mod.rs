//! Expectation and variance of the four stochastic indices as polynomials in
//! the pentagon count `n` and the Mode1 probability `p1`.
//!
//! Two tables live side by side. The *published* table stores the
//! coefficients as they appear in the literature. The *verified* table is
//! rebuilt on first use from the recurrence engine and exact enumeration:
//! expectations are affine in `p1`, so they are interpolated from the two
//! deterministic chains at `n = 1..=6`; variances factor as
//! `p1 (1 - p1) V(n)` and `V` is interpolated from the exact `p1 = 1/2`
//! variances at the same points. [`report`] compares the two.

mod poly;
pub mod report;

use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub use poly::Poly;
pub use report::{
    discrepancies, grid_csv, moment_report, within_tolerance, Discrepancy, MomentReport, MomentRow, MonteCarloOptions,
    Quantity, ReportOptions, MATCH_TOLERANCE,
};

use crate::chain::{AttachmentMode, ProbabilityParams};
use crate::distribution::exact_distributions;
use crate::indices::incremental::{carry_recurrence, AffineInN};
use crate::indices::{IncrementalEngine, Index};
use crate::scalar::{exact, exact_int, Exact, Scalar};

/// Which coefficient table to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Published,
    /// Rebuilt from exact enumeration.
    Verified,
    /// Published where it agrees with the verified table, verified elsewhere.
    Reconciled,
}

impl std::str::FromStr for Formula {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "published" => Ok(Formula::Published),
            "verified" => Ok(Formula::Verified),
            "reconciled" => Ok(Formula::Reconciled),
            other => Err(format!("unknown formula '{}' (expected published, verified, reconciled)", other)),
        }
    }
}

/// `base(n) + p1 · slope(n)`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineInP {
    pub base: Poly,
    pub slope: Poly,
}

impl AffineInP {
    fn from_ratios(base: &[(i64, i64)], slope: &[(i64, i64)]) -> Self {
        AffineInP { base: Poly::from_ratios(base), slope: Poly::from_ratios(slope) }
    }

    pub fn eval<T: Scalar>(&self, n: usize, p1: &T) -> T {
        let x = T::from_u64(n as u64);
        self.base.eval(&x) + p1.clone() * self.slope.eval(&x)
    }
}

/// Per-step carry increments `slope·n + intercept` under each mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Increments {
    pub mode1: AffineInN,
    pub mode2: AffineInN,
}

/// `(sigma2, sigma2_tilde, r)` of one index at one `p1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentParams<T> {
    pub index: Index,
    pub sigma2: T,
    pub sigma2_tilde: T,
    pub r: T,
}

/// Auxiliary anchor sequences of the expectation recurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sequence {
    /// E Σ_v d(v)·dist(u_n, v)
    A,
    /// E Σ_v dist(u_n, v)
    B,
    /// E Σ_v d(v)·r(u_n, v)
    C,
    /// E Σ_v r(u_n, v)
    D,
}

impl Sequence {
    pub const ALL: [Sequence; 4] = [Sequence::A, Sequence::B, Sequence::C, Sequence::D];
}

fn slot(index: Index) -> usize {
    Index::ALL.iter().position(|&i| i == index).expect("index listed")
}

fn lift<T: Scalar>(q: Ratio<i128>) -> T {
    T::from_i128(*q.numer()) / T::from_i128(*q.denom())
}

pub fn published_expectation(index: Index) -> AffineInP {
    match index {
        Index::Gutman => {
            AffineInP::from_ratios(&[(-1, 1), (1, 1), (-12, 1), (72, 1)], &[(0, 1), (-48, 1), (72, 1), (-24, 1)])
        }
        Index::Schultz => {
            AffineInP::from_ratios(&[(0, 1), (-7, 1), (7, 1), (60, 1)], &[(0, 1), (-40, 1), (60, 1), (-20, 1)])
        }
        Index::KfStar => {
            AffineInP::from_ratios(&[(-49, 1), (193, 5), (-12, 5), (264, 5)], &[(0, 1), (-96, 5), (144, 5), (-48, 5)])
        }
        Index::KfPlus => {
            AffineInP::from_ratios(&[(0, 1), (-15, 1), (11, 1), (44, 1)], &[(48, 1), (-88, 1), (48, 1), (-8, 1)])
        }
    }
}

pub fn published_increments(index: Index) -> Increments {
    let r = |p: i128, q: i128| Ratio::new(p, q);
    let (a, c, b, d) = match index {
        Index::Gutman => (r(288, 1), r(156, 1), r(432, 1), r(300, 1)),
        Index::Schultz => (r(240, 1), r(113, 1), r(360, 1), r(233, 1)),
        Index::KfStar => (r(1296, 5), r(876, 5), r(1584, 5), r(1164, 5)),
        Index::KfPlus => (r(216, 1), r(133, 1), r(264, 1), r(181, 1)),
    };
    Increments { mode1: AffineInN { slope: a, intercept: -c }, mode2: AffineInN { slope: b, intercept: -d } }
}

/// Increments read off the recurrence engine.
pub fn verified_increments(index: Index) -> Increments {
    Increments {
        mode1: carry_recurrence(index, AttachmentMode::Mode1).1,
        mode2: carry_recurrence(index, AttachmentMode::Mode2).1,
    }
}

pub fn published_sequence(kind: Sequence) -> AffineInP {
    match kind {
        Sequence::A => AffineInP::from_ratios(&[(1, 1), (-7, 1), (18, 1)], &[(0, 1), (6, 1), (-6, 1)]),
        Sequence::B => AffineInP::from_ratios(&[(0, 1), (-3, 2), (15, 2)], &[(0, 1), (5, 2), (-5, 2)]),
        Sequence::C => AffineInP::from_ratios(&[(1, 1), (-31, 5), (66, 5)], &[(0, 1), (12, 5), (-12, 5)]),
        Sequence::D => AffineInP::from_ratios(&[(0, 1), (-3, 2), (11, 2)], &[(-4, 1), (5, 1), (-1, 1)]),
    }
}

/// Degree-5 variance polynomial shared by all four indices, with the
/// moment parameters as coefficients.
fn variance_poly(s2: &Exact, s2t: &Exact, r: &Exact) -> Poly {
    let k = |a: i64| exact_int(a as i128);
    let c0 = r * k(60) - s2 * k(30) - s2t * k(30);
    let c1 = s2 * k(59) + s2t * k(65) - r * k(120);
    let c2 = r * k(65) - s2 * k(30) - s2t * k(45);
    let c3 = s2t * k(10);
    let c4 = -(r * k(5));
    let c5 = s2.clone();
    Poly::new(vec![c0, c1, c2, c3, c4, c5]).scale(&exact(1, 30))
}

/// `V(n)` such that the published variance is `p1 (1 - p1) V(n)`.
pub fn published_variance_unit(index: Index) -> Poly {
    let inc = published_increments(index);
    let to_exact = |q: Ratio<i128>| exact_int(*q.numer()) / exact_int(*q.denom());
    let ds = to_exact(inc.mode2.slope - inc.mode1.slope);
    let dt = to_exact(inc.mode1.intercept - inc.mode2.intercept);
    variance_poly(&(&ds * &ds), &(&dt * &dt), &(&ds * &dt))
}

/// Number of interpolation nodes `n = 1..=FIT_POINTS`.
pub const FIT_POINTS: usize = 6;

struct VerifiedTables {
    expectation: Vec<AffineInP>,
    variance_unit: Vec<Poly>,
    sequences: Vec<AffineInP>,
}

fn uniform_engine(n: usize, mode: AttachmentMode) -> IncrementalEngine {
    let mut e = IncrementalEngine::new();
    if n >= 2 {
        e.attach(AttachmentMode::Mode1);
    }
    for _ in 2..n {
        e.attach(mode);
    }
    e
}

fn interpolate_at_nodes(values: impl Fn(usize) -> Exact, nodes: usize) -> Poly {
    let pts: Vec<(Exact, Exact)> = (1..=nodes).map(|n| (exact_int(n as i128), values(n))).collect();
    Poly::interpolate(&pts)
}

fn affine_from_endpoints(at_zero: Poly, at_one: Poly) -> AffineInP {
    let slope = at_one.sub(&at_zero);
    AffineInP { base: at_zero, slope }
}

fn build_verified() -> VerifiedTables {
    let fifths = |raw: i128, index: Index| {
        if index.is_resistance_based() {
            exact(raw as i64, 5)
        } else {
            exact_int(raw)
        }
    };
    let expectation = Index::ALL
        .iter()
        .map(|&index| {
            let at =
                |mode| interpolate_at_nodes(|n| fifths(uniform_engine(n, mode).totals().raw(index), index), FIT_POINTS);
            affine_from_endpoints(at(AttachmentMode::Mode2), at(AttachmentMode::Mode1))
        })
        .collect();

    let half = ProbabilityParams::new(exact(1, 2)).expect("1/2 is a probability");
    let half_vars: Vec<Vec<Exact>> = (1..=FIT_POINTS)
        .map(|n| {
            exact_distributions(n, &half, usize::MAX)
                .expect("small enumeration")
                .into_iter()
                .map(|d| d.variance * exact_int(4))
                .collect()
        })
        .collect();
    let variance_unit =
        (0..Index::ALL.len()).map(|s| interpolate_at_nodes(|n| half_vars[n - 1][s].clone(), FIT_POINTS)).collect();

    let sequences = Sequence::ALL
        .iter()
        .map(|&kind| {
            let at = |mode| {
                interpolate_at_nodes(
                    |n| {
                        let c = uniform_engine(n, mode).carry(mode);
                        match kind {
                            Sequence::A => exact_int(c.deg_dist),
                            Sequence::B => exact_int(c.dist),
                            Sequence::C => exact(c.deg_res5 as i64, 5),
                            Sequence::D => exact(c.res5 as i64, 5),
                        }
                    },
                    FIT_POINTS,
                )
            };
            affine_from_endpoints(at(AttachmentMode::Mode2), at(AttachmentMode::Mode1))
        })
        .collect();

    VerifiedTables { expectation, variance_unit, sequences }
}

fn verified() -> &'static VerifiedTables {
    static TABLES: OnceLock<VerifiedTables> = OnceLock::new();
    TABLES.get_or_init(build_verified)
}

pub fn verified_expectation(index: Index) -> AffineInP {
    verified().expectation[slot(index)].clone()
}

pub fn verified_variance_unit(index: Index) -> Poly {
    verified().variance_unit[slot(index)].clone()
}

pub fn verified_sequence(kind: Sequence) -> AffineInP {
    let i = Sequence::ALL.iter().position(|&k| k == kind).expect("sequence listed");
    verified().sequences[i].clone()
}

/// `true` when the published polynomial equals the verified one exactly.
pub fn published_agrees(index: Index, quantity: Quantity) -> bool {
    match quantity {
        Quantity::Expectation => published_expectation(index) == verified_expectation(index),
        Quantity::Variance => published_variance_unit(index) == verified_variance_unit(index),
    }
}

fn resolve(formula: Formula, index: Index, quantity: Quantity) -> Formula {
    match formula {
        Formula::Reconciled if published_agrees(index, quantity) => Formula::Published,
        Formula::Reconciled => Formula::Verified,
        f => f,
    }
}

/// Moment parameters from a pair of increment laws.
pub fn params_from_increments<T: Scalar>(index: Index, inc: &Increments, p1: &T) -> MomentParams<T> {
    let (a, b) = (lift::<T>(inc.mode1.slope), lift::<T>(inc.mode2.slope));
    let (c, d) = (lift::<T>(-inc.mode1.intercept), lift::<T>(-inc.mode2.intercept));
    let p = p1.clone();
    let q = T::one() - p.clone();
    let mean_s = a.clone() * p.clone() + b.clone() * q.clone();
    let mean_t = c.clone() * p.clone() + d.clone() * q.clone();
    let sigma2 =
        a.clone() * a.clone() * p.clone() + b.clone() * b.clone() * q.clone() - mean_s.clone() * mean_s.clone();
    let sigma2_tilde =
        c.clone() * c.clone() * p.clone() + d.clone() * d.clone() * q.clone() - mean_t.clone() * mean_t.clone();
    let r = a * c * p + b * d * q - mean_s * mean_t;
    MomentParams { index, sigma2, sigma2_tilde, r }
}

/// Published moment parameters.
pub fn moment_params<T: Scalar>(index: Index, p1: &T) -> MomentParams<T> {
    params_from_increments(index, &published_increments(index), p1)
}

pub fn moment_params_with<T: Scalar>(formula: Formula, index: Index, p1: &T) -> MomentParams<T> {
    match formula {
        Formula::Published => moment_params(index, p1),
        _ => params_from_increments(index, &verified_increments(index), p1),
    }
}

/// Evaluates the degree-5 variance polynomial for given moment parameters.
pub fn variance_from_params<T: Scalar>(params: &MomentParams<T>, n: usize) -> T {
    let k = |v: i128| T::from_i128(v);
    let (s2, s2t, r) = (params.sigma2.clone(), params.sigma2_tilde.clone(), params.r.clone());
    let coeffs = [
        k(60) * r.clone() - k(30) * s2.clone() - k(30) * s2t.clone(),
        k(59) * s2.clone() + k(65) * s2t.clone() - k(120) * r.clone(),
        k(65) * r.clone() - k(30) * s2.clone() - k(45) * s2t.clone(),
        k(10) * s2t,
        -(k(5) * r),
        s2,
    ];
    let x = T::from_u64(n as u64);
    coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone()) / k(30)
}

/// Published expected value.
pub fn expected_index<T: Scalar>(index: Index, n: usize, p1: &T) -> T {
    published_expectation(index).eval(n, p1)
}

pub fn expected_index_with<T: Scalar>(formula: Formula, index: Index, n: usize, p1: &T) -> T {
    match resolve(formula, index, Quantity::Expectation) {
        Formula::Published => expected_index(index, n, p1),
        _ => verified_expectation(index).eval(n, p1),
    }
}

/// Published variance.
pub fn variance_index<T: Scalar>(index: Index, n: usize, p1: &T) -> T {
    variance_from_params(&moment_params(index, p1), n)
}

pub fn variance_index_with<T: Scalar>(formula: Formula, index: Index, n: usize, p1: &T) -> T {
    match resolve(formula, index, Quantity::Variance) {
        Formula::Published => variance_index(index, n, p1),
        _ => {
            let p = p1.clone();
            let pq = p.clone() * (T::one() - p);
            pq * verified_variance_unit(index).eval(&T::from_u64(n as u64))
        }
    }
}

/// Published sequence value.
pub fn sequence_values<T: Scalar>(kind: Sequence, n: usize, p1: &T) -> T {
    published_sequence(kind).eval(n, p1)
}

pub fn sequence_values_with<T: Scalar>(formula: Formula, kind: Sequence, n: usize, p1: &T) -> T {
    let published = published_sequence(kind);
    let verified = verified_sequence(kind);
    match formula {
        Formula::Published => published.eval(n, p1),
        Formula::Verified => verified.eval(n, p1),
        Formula::Reconciled if published == verified => published.eval(n, p1),
        Formula::Reconciled => verified.eval(n, p1),
    }
}
