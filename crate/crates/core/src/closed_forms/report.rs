//! Published-versus-verified audit and the moment report.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{
    expected_index, expected_index_with, published_agrees, published_expectation, published_increments,
    published_sequence, published_variance_unit, variance_index, variance_index_with, verified_expectation,
    verified_increments, verified_sequence, verified_variance_unit, AffineInP, Formula, Poly, Sequence,
};
use crate::chain::{AttachmentMode, ProbabilityParams};
use crate::distribution::{exact_distributions, monte_carlo, SamplingPlan};
use crate::error::Result;
use crate::indices::incremental::{carry_recurrence, step_constant, AffineInN, PentagonSums};
use crate::indices::Index;
use crate::metrics::pentagon_distance;
use crate::scalar::{exact, exact_int, Exact, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Expectation,
    Variance,
}

/// One audited constant or polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub item: String,
    pub index: Option<Index>,
    pub quantity: Option<Quantity>,
    pub published: String,
    pub verified: String,
    /// Published minus verified, when both are polynomials.
    pub difference: Option<String>,
    pub agrees: bool,
}

fn ratio_exact(q: Ratio<i128>) -> Exact {
    exact_int(*q.numer()) / exact_int(*q.denom())
}

fn affine_n(a: &AffineInN) -> Poly {
    Poly::new(vec![ratio_exact(a.intercept), ratio_exact(a.slope)])
}

fn show_affine_p(a: &AffineInP) -> String {
    format!("{} + p1*({})", a.base, a.slope)
}

fn entry(
    item: String,
    index: Option<Index>,
    quantity: Option<Quantity>,
    published: String,
    verified: String,
    agrees: bool,
) -> Discrepancy {
    Discrepancy { item, index, quantity, published, verified, difference: None, agrees }
}

fn poly_entry(
    item: String,
    index: Option<Index>,
    quantity: Option<Quantity>,
    published: &Poly,
    verified: &Poly,
) -> Discrepancy {
    let mut d = entry(item, index, quantity, published.to_string(), verified.to_string(), published == verified);
    d.difference = Some(published.sub(verified).to_string());
    d
}

fn affine_p_entry(
    item: String,
    index: Option<Index>,
    quantity: Option<Quantity>,
    published: &AffineInP,
    verified: &AffineInP,
) -> Discrepancy {
    let mut d = entry(item, index, quantity, show_affine_p(published), show_affine_p(verified), published == verified);
    d.difference = Some(show_affine_p(&AffineInP {
        base: published.base.sub(&verified.base),
        slope: published.slope.sub(&verified.slope),
    }));
    d
}

fn published_step_constant(index: Index) -> AffineInN {
    match index {
        Index::Gutman => AffineInN::integer(276, 49),
        Index::Schultz => AffineInN::integer(247, 55),
        Index::KfStar => AffineInN::integer(228, 77),
        Index::KfPlus => AffineInN::integer(203, 35),
    }
}

fn published_carry_seed(index: Index) -> i128 {
    match index {
        Index::Gutman => 144,
        Index::Schultz => 132,
        Index::KfStar => 96,
        Index::KfPlus => 88,
    }
}

/// Every audited item; `agrees == false` marks a documented discrepancy.
pub fn discrepancies() -> Vec<Discrepancy> {
    let mut out = Vec::new();
    for index in Index::ALL {
        out.push(affine_p_entry(
            format!("expected {}", index),
            Some(index),
            Some(Quantity::Expectation),
            &published_expectation(index),
            &verified_expectation(index),
        ));
        out.push(poly_entry(
            format!("variance of {} divided by p1(1-p1)", index),
            Some(index),
            Some(Quantity::Variance),
            &published_variance_unit(index),
            &verified_variance_unit(index),
        ));
    }
    for index in Index::ALL {
        let (p, v) = (affine_n(&published_step_constant(index)), affine_n(&step_constant(index)));
        out.push(poly_entry(format!("constant term of the one-step {} update", index), Some(index), None, &p, &v));

        let seed = carry_recurrence(index, AttachmentMode::Mode1).0;
        let published = published_carry_seed(index);
        out.push(entry(
            format!("{} carry at n = 1", index),
            Some(index),
            None,
            published.to_string(),
            ratio_exact(seed).to_string(),
            seed == Ratio::from_integer(published),
        ));

        let (pi, vi) = (published_increments(index), verified_increments(index));
        for (mode, p, v) in [(AttachmentMode::Mode1, pi.mode1, vi.mode1), (AttachmentMode::Mode2, pi.mode2, vi.mode2)] {
            out.push(poly_entry(
                format!("{} carry increment under {}", index, mode),
                Some(index),
                None,
                &affine_n(&p),
                &affine_n(&v),
            ));
        }
    }
    for kind in Sequence::ALL {
        out.push(affine_p_entry(
            format!("anchor sequence {:?}_n", kind),
            None,
            None,
            &published_sequence(kind),
            &verified_sequence(kind),
        ));
    }
    let deg_dist: i128 = (1..=5).map(|i| if i == 1 { 3 } else { 2 } * pentagon_distance(1, i) as i128).sum();
    out.push(entry(
        "sum of d(x_i)·dist(x_1, x_i) over a new terminal pentagon".into(),
        None,
        None,
        "22".into(),
        deg_dist.to_string(),
        deg_dist == 22,
    ));
    let inner = PentagonSums::new().inner.kf_star5;
    out.push(entry(
        "kf_star pair sum inside a new terminal pentagon".into(),
        Some(Index::KfStar),
        None,
        "96".into(),
        exact(inner as i64, 5).to_string(),
        inner == 96 * 5,
    ));
    out
}

pub const MATCH_TOLERANCE: f64 = 1e-9;

/// `|value - reference| <= 1e-9 · max(1, |reference|)`, evaluated in `T`.
pub fn within_tolerance<T: Scalar>(value: &T, reference: &T) -> bool {
    let tol = T::from_exact(&exact(1, 1_000_000_000));
    let r = reference.abs();
    let scale = if r > T::one() { r } else { T::one() };
    (value.clone() - reference.clone()).abs() <= tol * scale
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloOptions {
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Enumerate exactly when `n` is at most this cap.
    pub oracle_cap: Option<usize>,
    pub monte_carlo: Option<MonteCarloOptions>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub index: Index,
    pub n: usize,
    pub p1: String,
    pub expected_published: f64,
    pub expected_verified: f64,
    pub variance_published: f64,
    pub variance_verified: f64,
    pub expected_oracle: Option<f64>,
    pub variance_oracle: Option<f64>,
    pub expected_match: Option<bool>,
    pub variance_match: Option<bool>,
    pub expected_gap_abs: Option<f64>,
    pub expected_gap_rel: Option<f64>,
    pub variance_gap_abs: Option<f64>,
    pub variance_gap_rel: Option<f64>,
    /// Both verified quantities match the oracle.
    pub verified_match: Option<bool>,
    pub mc_mean: Option<f64>,
    pub mc_variance: Option<f64>,
    /// A published value misses the oracle and no discrepancy entry plus
    /// matching verified value accounts for it.
    pub unexplained: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub rows: Vec<MomentRow>,
    /// Audited items where the published value is wrong.
    pub discrepancies: Vec<Discrepancy>,
}

impl MomentReport {
    pub fn unexplained(&self) -> Vec<&MomentRow> {
        self.rows.iter().filter(|r| r.unexplained).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let flag = |v: Option<bool>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from(
            "index,n,p1,expected_published,expected_verified,expected_oracle,expected_match,\
             variance_published,variance_verified,variance_oracle,variance_match,mc_mean,mc_variance,unexplained\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.index,
                r.n,
                r.p1,
                r.expected_published,
                r.expected_verified,
                opt(r.expected_oracle),
                flag(r.expected_match),
                r.variance_published,
                r.variance_verified,
                opt(r.variance_oracle),
                flag(r.variance_match),
                opt(r.mc_mean),
                opt(r.mc_variance),
                r.unexplained
            ));
        }
        out
    }

    /// Aligned text table followed by the discrepancy list.
    pub fn to_pretty(&self) -> String {
        let mark = |v: Option<bool>| match v {
            Some(true) => "ok",
            Some(false) => "MISMATCH",
            None => "-",
        };
        let mut out = format!(
            "{:<8} {:>4} {:>8} {:>22} {:>22} {:>9} {:>24} {:>24} {:>9}\n",
            "index", "n", "p1", "E published", "E oracle", "E", "Var published", "Var oracle", "Var"
        );
        for r in &self.rows {
            let o = |v: Option<f64>| v.map(|x| format!("{:.6}", x)).unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{:<8} {:>4} {:>8} {:>22.6} {:>22} {:>9} {:>24.6} {:>24} {:>9}\n",
                r.index.key(),
                r.n,
                r.p1,
                r.expected_published,
                o(r.expected_oracle),
                mark(r.expected_match),
                r.variance_published,
                o(r.variance_oracle),
                mark(r.variance_match)
            ));
        }
        if !self.discrepancies.is_empty() {
            out.push_str("\ndiscrepancies (published vs verified):\n");
            for d in &self.discrepancies {
                out.push_str(&format!("  {}: published {} | verified {}\n", d.item, d.published, d.verified));
            }
        }
        out
    }
}

fn gap<T: Scalar>(value: &T, reference: &T) -> (f64, f64) {
    let abs = (value.clone() - reference.clone()).abs().to_f64();
    (abs, abs / reference.abs().to_f64().max(1.0))
}

/// Evaluates published and verified moments on a grid and, where enabled,
/// compares them with exact enumeration and Monte Carlo.
///
/// The closed forms run in `T`; the enumeration oracle always runs on the
/// exact `p1` and is converted to `T` only for the comparison.
pub fn moment_report<T: Scalar>(ns: &[usize], ps: &[Exact], options: &ReportOptions) -> Result<MomentReport> {
    let mut rows = Vec::new();
    for &n in ns {
        for exact_p in ps {
            let params = ProbabilityParams::new(exact_p.clone())?;
            let p = &T::from_exact(exact_p);
            let oracle: Option<Vec<(T, T)>> = match options.oracle_cap {
                Some(cap) if n <= cap => Some(
                    exact_distributions(n, &params, cap)?
                        .into_iter()
                        .map(|d| (T::from_exact(&d.mean), T::from_exact(&d.variance)))
                        .collect(),
                ),
                _ => None,
            };
            let mc = match options.monte_carlo {
                Some(m) => Some(monte_carlo(
                    &Index::ALL,
                    &SamplingPlan { n, p1: p.to_f64(), samples: m.samples, seed: m.seed, workers: m.workers },
                )?),
                None => None,
            };
            for (slot, &index) in Index::ALL.iter().enumerate() {
                let e_pub = expected_index(index, n, p);
                let v_pub = variance_index(index, n, p);
                let e_ver = expected_index_with(Formula::Verified, index, n, p);
                let v_ver = variance_index_with(Formula::Verified, index, n, p);
                let mut row = MomentRow {
                    index,
                    n,
                    p1: p.to_text(),
                    expected_published: e_pub.to_f64(),
                    expected_verified: e_ver.to_f64(),
                    variance_published: v_pub.to_f64(),
                    variance_verified: v_ver.to_f64(),
                    expected_oracle: None,
                    variance_oracle: None,
                    expected_match: None,
                    variance_match: None,
                    expected_gap_abs: None,
                    expected_gap_rel: None,
                    variance_gap_abs: None,
                    variance_gap_rel: None,
                    verified_match: None,
                    mc_mean: mc.as_ref().map(|s| s[slot].mean),
                    mc_variance: mc.as_ref().map(|s| s[slot].variance()),
                    unexplained: false,
                };
                if let Some(moments) = &oracle {
                    let (mean, variance) = &moments[slot];
                    let (e_ok, v_ok) = (within_tolerance(&e_pub, mean), within_tolerance(&v_pub, variance));
                    let ver_e_ok = within_tolerance(&e_ver, mean);
                    let ver_v_ok = within_tolerance(&v_ver, variance);
                    let (ea, er) = gap(&e_pub, mean);
                    let (va, vr) = gap(&v_pub, variance);
                    row.expected_oracle = Some(mean.to_f64());
                    row.variance_oracle = Some(variance.to_f64());
                    row.expected_match = Some(e_ok);
                    row.variance_match = Some(v_ok);
                    row.expected_gap_abs = Some(ea);
                    row.expected_gap_rel = Some(er);
                    row.variance_gap_abs = Some(va);
                    row.variance_gap_rel = Some(vr);
                    row.verified_match = Some(ver_e_ok && ver_v_ok);
                    let explained =
                        |ok: bool, quantity, ver_ok: bool| ok || (!published_agrees(index, quantity) && ver_ok);
                    row.unexplained = !explained(e_ok, Quantity::Expectation, ver_e_ok)
                        || !explained(v_ok, Quantity::Variance, ver_v_ok);
                }
                rows.push(row);
            }
        }
    }
    Ok(MomentReport { rows, discrepancies: discrepancies().into_iter().filter(|d| !d.agrees).collect() })
}

/// Expectation and variance surface, one row per `(n, p1)`.
pub fn grid_csv<T: Scalar>(ns: &[usize], ps: &[T], formula: Formula) -> String {
    let mut out = String::from("n,p1,E_gut,E_schultz,E_kfstar,E_kfplus,Var_gut,Var_schultz,Var_kfstar,Var_kfplus\n");
    for &n in ns {
        for p in ps {
            let mut cells = vec![n.to_string(), p.to_text()];
            cells.extend(Index::ALL.iter().map(|&i| expected_index_with(formula, i, n, p).to_f64().to_string()));
            cells.extend(Index::ALL.iter().map(|&i| variance_index_with(formula, i, n, p).to_f64().to_string()));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }
    out
}
