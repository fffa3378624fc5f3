//! The six distance and resistance indices, computed either from metric
//! matrices or by the O(n) recurrence engine in [`incremental`].

pub mod incremental;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chain::PentagonChainGraph;
use crate::error::{Error, Result};
use crate::metrics::{MetricKind, MetricMatrix};
use crate::scalar::{format_exact, parse_exact, Exact, Scalar};

pub use incremental::{incremental_indices, AnchorCarry, IncrementalEngine, RawTotals};

/// The four indices whose distribution is random under the chain model
/// (Wiener and Kirchhoff ride along in [`IndexBundle`] but have no published
/// moment formulas).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Index {
    /// Σ d(u)d(v)·d(u,v)
    #[serde(rename = "gutman")]
    Gutman,
    /// Σ (d(u)+d(v))·d(u,v)
    #[serde(rename = "schultz")]
    Schultz,
    /// Σ d(u)d(v)·r(u,v), the multiplicative degree-Kirchhoff index
    #[serde(rename = "kf_star")]
    KfStar,
    /// Σ (d(u)+d(v))·r(u,v), the additive degree-Kirchhoff index
    #[serde(rename = "kf_plus")]
    KfPlus,
}

impl Index {
    pub const ALL: [Index; 4] = [Index::Gutman, Index::Schultz, Index::KfStar, Index::KfPlus];

    pub fn key(self) -> &'static str {
        match self {
            Index::Gutman => "gutman",
            Index::Schultz => "schultz",
            Index::KfStar => "kf_star",
            Index::KfPlus => "kf_plus",
        }
    }

    pub fn is_resistance_based(self) -> bool {
        matches!(self, Index::KfStar | Index::KfPlus)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Index {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "gutman" | "gut" => Ok(Index::Gutman),
            "schultz" | "s" => Ok(Index::Schultz),
            "kf_star" | "kfstar" | "multkirchhoff" => Ok(Index::KfStar),
            "kf_plus" | "kfplus" | "addkirchhoff" => Ok(Index::KfPlus),
            other => Err(format!("unknown index '{}' (expected gutman, schultz, kf_star, kf_plus)", other)),
        }
    }
}

/// All six index values of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexBundle<T> {
    pub n: usize,
    pub wiener: T,
    pub gutman: T,
    pub schultz: T,
    pub kirchhoff: T,
    pub mult_kirchhoff: T,
    pub add_kirchhoff: T,
}

impl<T: Clone> IndexBundle<T> {
    pub fn get(&self, index: Index) -> &T {
        match index {
            Index::Gutman => &self.gutman,
            Index::Schultz => &self.schultz,
            Index::KfStar => &self.mult_kirchhoff,
            Index::KfPlus => &self.add_kirchhoff,
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> IndexBundle<U> {
        IndexBundle {
            n: self.n,
            wiener: f(&self.wiener),
            gutman: f(&self.gutman),
            schultz: f(&self.schultz),
            kirchhoff: f(&self.kirchhoff),
            mult_kirchhoff: f(&self.mult_kirchhoff),
            add_kirchhoff: f(&self.add_kirchhoff),
        }
    }
}

/// JSON shape of an exact bundle: every value is a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexBundleRecord {
    pub n: usize,
    pub wiener: String,
    pub gutman: String,
    pub schultz: String,
    pub kirchhoff: String,
    pub kf_star: String,
    pub kf_plus: String,
}

impl IndexBundle<Exact> {
    pub fn to_record(&self) -> IndexBundleRecord {
        IndexBundleRecord {
            n: self.n,
            wiener: format_exact(&self.wiener),
            gutman: format_exact(&self.gutman),
            schultz: format_exact(&self.schultz),
            kirchhoff: format_exact(&self.kirchhoff),
            kf_star: format_exact(&self.mult_kirchhoff),
            kf_plus: format_exact(&self.add_kirchhoff),
        }
    }

    pub fn from_record(r: &IndexBundleRecord) -> Option<Self> {
        Some(IndexBundle {
            n: r.n,
            wiener: parse_exact(&r.wiener)?,
            gutman: parse_exact(&r.gutman)?,
            schultz: parse_exact(&r.schultz)?,
            kirchhoff: parse_exact(&r.kirchhoff)?,
            mult_kirchhoff: parse_exact(&r.kf_star)?,
            add_kirchhoff: parse_exact(&r.kf_plus)?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("record serializes")
    }
}

/// Sums each index over unordered vertex pairs of the given matrices.
pub fn compute_indices<T: Scalar>(
    g: &PentagonChainGraph,
    dist: &MetricMatrix<u32>,
    res: &MetricMatrix<T>,
) -> Result<IndexBundle<T>> {
    let size = g.vertex_count();
    for m in [dist.size(), res.size()] {
        if m != size {
            return Err(Error::DimensionMismatch { expected: size, got: m });
        }
    }
    if dist.kind() != MetricKind::Distance {
        return Err(Error::KindMismatch { expected: "distance", got: dist.kind().name() });
    }
    if res.kind() != MetricKind::Resistance {
        return Err(Error::KindMismatch { expected: "resistance", got: res.kind().name() });
    }

    let deg: Vec<i128> = g.degrees().into_iter().map(|d| d as i128).collect();
    let (mut wiener, mut gutman, mut schultz) = (0i128, 0i128, 0i128);
    for (u, v, &d) in dist.pairs() {
        let d = d as i128;
        wiener += d;
        gutman += deg[u] * deg[v] * d;
        schultz += (deg[u] + deg[v]) * d;
    }

    let (mut kirchhoff, mut mult, mut add) = (T::zero(), T::zero(), T::zero());
    for (u, v, r) in res.pairs() {
        kirchhoff = kirchhoff + r.clone();
        mult = mult + T::from_i128(deg[u] * deg[v]) * r.clone();
        add = add + T::from_i128(deg[u] + deg[v]) * r.clone();
    }

    Ok(IndexBundle {
        n: g.n(),
        wiener: T::from_i128(wiener),
        gutman: T::from_i128(gutman),
        schultz: T::from_i128(schultz),
        kirchhoff,
        mult_kirchhoff: mult,
        add_kirchhoff: add,
    })
}
