//! All-pairs distance and resistance matrices.
//!
//! Three engines produce them: breadth-first search for distances, a dense
//! Laplacian solve for resistances in floating point, and a structured engine
//! that composes per-pentagon tables across the bridges (every bridge is a cut
//! edge, so both metrics are additive across it). The engines are independent
//! and are checked against each other.

mod bfs;
mod laplacian;
mod structured;

pub use bfs::bfs_all_pairs;
pub use laplacian::{laplacian_resistance, laplacian_resistance_with_cap, DEFAULT_DENSE_CAP, RESIDUAL_TOLERANCE};
pub use structured::{pentagon_distance, pentagon_resistance, structured_metrics};

use crate::scalar::{format_exact, Exact};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Distance,
    Resistance,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Distance => "distance",
            MetricKind::Resistance => "resistance",
        }
    }
}

/// Symmetric matrix with zero diagonal, stored as its strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix<T> {
    size: usize,
    kind: MetricKind,
    upper: Vec<T>,
}

impl<T: Clone> MetricMatrix<T> {
    pub(crate) fn from_fn(size: usize, kind: MetricKind, mut entry: impl FnMut(usize, usize) -> T) -> Self {
        let mut upper = Vec::with_capacity(size * size.saturating_sub(1) / 2);
        for u in 0..size {
            for v in u + 1..size {
                upper.push(entry(u, v));
            }
        }
        MetricMatrix { size, kind, upper }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    #[inline]
    fn offset(&self, u: usize, v: usize) -> usize {
        debug_assert!(u < v && v < self.size);
        u * (2 * self.size - u - 1) / 2 + (v - u - 1)
    }

    /// Entry for an off-diagonal pair; `None` on the diagonal.
    pub fn get(&self, u: usize, v: usize) -> Option<&T> {
        match u.cmp(&v) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some(&self.upper[self.offset(u, v)]),
            std::cmp::Ordering::Greater => Some(&self.upper[self.offset(v, u)]),
        }
    }

    /// Unordered pairs `(u, v, entry)` with `u < v`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        let n = self.size;
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v))).zip(self.upper.iter()).map(|((u, v), x)| (u, v, x))
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> MetricMatrix<U> {
        MetricMatrix { size: self.size, kind: self.kind, upper: self.upper.iter().map(f).collect() }
    }

    /// CSV with a header row of vertex ids followed by the full matrix
    /// (diagonal written as `zero`).
    pub fn to_csv_with(&self, zero: &str, fmt: impl Fn(&T) -> String) -> String {
        let mut out = String::new();
        let header: Vec<String> = (0..self.size).map(|v| v.to_string()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for u in 0..self.size {
            let row: Vec<String> = (0..self.size)
                .map(|v| match self.get(u, v) {
                    Some(x) => fmt(x),
                    None => zero.to_string(),
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

impl MetricMatrix<u32> {
    pub fn to_csv(&self) -> String {
        self.to_csv_with("0", |d| d.to_string())
    }
}

impl MetricMatrix<Exact> {
    /// CSV with rational entries serialized as `p/q`.
    pub fn to_csv(&self) -> String {
        self.to_csv_with("0/1", format_exact)
    }
}

impl MetricMatrix<f64> {
    pub fn to_csv(&self) -> String {
        self.to_csv_with("0", |x| format!("{}", x))
    }
}

impl<T: Clone> MetricMatrix<T> {
    /// Largest entrywise discrepancy under `diff`.
    pub fn max_abs_diff_by(&self, other: &Self, diff: impl Fn(&T, &T) -> f64) -> f64 {
        self.upper.iter().zip(&other.upper).map(|(a, b)| diff(a, b)).fold(0.0, f64::max)
    }
}
