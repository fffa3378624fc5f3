//! Pentagonal chain realizations: blueprints, graphs, sampling and exhaustive
//! enumeration.
//!
//! Vertex `x_{k,j}` (pentagon `k` in `1..=n`, position `j` in `1..=5`) has the
//! 0-based id `5(k-1) + (j-1)`. Pentagon `k` is the cycle
//! `x_{k,1} - x_{k,2} - x_{k,3} - x_{k,4} - x_{k,5} - x_{k,1}`, and bridge `k`
//! joins the attachment vertex `u_k` to `x_{k+1,1}`. `u_1 = x_{1,1}`; for
//! `k >= 2` the attachment mode of pentagon `k` picks `x_{k,2}` (Mode1) or
//! `x_{k,3}` (Mode2). The mirror images `x_{k,5}` / `x_{k,4}` give isomorphic
//! chains and are not generated.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default largest `n` accepted by [`enumerate_blueprints`].
pub const DEFAULT_ENUM_CAP: usize = 22;

/// Environment variable that overrides [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "PENTACHAIN_ENUM_CAP";

/// Enumeration cap honouring [`ENUM_CAP_ENV`] when it parses.
pub fn enumeration_cap() -> usize {
    std::env::var(ENUM_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_ENUM_CAP)
}

/// Which vertex of a pentagon hosts the outgoing bridge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AttachmentMode {
    /// Neighbour of the entry vertex (`x_2`), chosen with probability `p1`.
    #[serde(rename = "M1")]
    Mode1,
    /// Entry vertex's distance-2 vertex (`x_3`), chosen with probability `1 - p1`.
    #[serde(rename = "M2")]
    Mode2,
}

impl AttachmentMode {
    /// Position (1-based) of the attachment vertex inside its pentagon.
    pub fn position(self) -> usize {
        match self {
            AttachmentMode::Mode1 => 2,
            AttachmentMode::Mode2 => 3,
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            AttachmentMode::Mode1 => AttachmentMode::Mode2,
            AttachmentMode::Mode2 => AttachmentMode::Mode1,
        }
    }
}

impl fmt::Display for AttachmentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttachmentMode::Mode1 => f.write_str("M1"),
            AttachmentMode::Mode2 => f.write_str("M2"),
        }
    }
}

/// Number of stochastic steps for a chain of `n` pentagons.
pub fn choice_count(n: usize) -> usize {
    n.saturating_sub(2)
}

/// One realization of the random process.
///
/// `choices[k - 2]` is the attachment mode of pentagon `k`, i.e. it decides
/// where the bridge towards pentagon `k + 1` leaves from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBlueprint")]
pub struct ChainBlueprint {
    n: usize,
    choices: Vec<AttachmentMode>,
}

#[derive(Deserialize)]
struct RawBlueprint {
    n: usize,
    choices: Vec<AttachmentMode>,
}

impl TryFrom<RawBlueprint> for ChainBlueprint {
    type Error = Error;

    fn try_from(raw: RawBlueprint) -> Result<Self> {
        ChainBlueprint::new(raw.n, raw.choices)
    }
}

impl ChainBlueprint {
    pub fn new(n: usize, choices: Vec<AttachmentMode>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPentagonCount(n));
        }
        let expected = choice_count(n);
        if choices.len() != expected {
            return Err(Error::ChoiceLengthMismatch { n, expected, got: choices.len() });
        }
        Ok(ChainBlueprint { n, choices })
    }

    /// Chain whose stochastic steps all use `mode`.
    pub fn uniform(n: usize, mode: AttachmentMode) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPentagonCount(n));
        }
        Self::new(n, vec![mode; choice_count(n)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn choices(&self) -> &[AttachmentMode] {
        &self.choices
    }

    pub fn mode1_count(&self) -> usize {
        self.choices.iter().filter(|&&m| m == AttachmentMode::Mode1).count()
    }

    /// Attachment vertex id `u_k` of pentagon `k` (1-based, `k < n`).
    pub fn attachment_vertex(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k < self.n);
        if k == 1 {
            vertex_id(1, 1)
        } else {
            vertex_id(k, self.choices[k - 2].position())
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("blueprint serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::BlueprintJson(e.to_string()))
    }
}

/// 0-based id of `x_{k,j}`.
pub fn vertex_id(k: usize, j: usize) -> usize {
    5 * (k - 1) + (j - 1)
}

/// `(k, j)` for a 0-based vertex id.
pub fn vertex_label(id: usize) -> (usize, usize) {
    (id / 5 + 1, id % 5 + 1)
}

/// `p1`, the probability of [`AttachmentMode::Mode1`] at each stochastic step.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityParams<T> {
    p1: T,
}

impl<T: Scalar> ProbabilityParams<T> {
    pub fn new(p1: T) -> Result<Self> {
        if p1 < T::zero() || p1 > T::one() {
            return Err(Error::InvalidProbability(format!("{:?}", p1)));
        }
        Ok(ProbabilityParams { p1 })
    }

    pub fn p1(&self) -> &T {
        &self.p1
    }

    pub fn p2(&self) -> T {
        T::one() - self.p1.clone()
    }

    /// Strictly inside `(0, 1)`, where the chain is genuinely random.
    pub fn is_interior(&self) -> bool {
        self.p1 > T::zero() && self.p1 < T::one()
    }
}

/// Labelled graph of a realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PentagonChainGraph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    bridges: Vec<(usize, usize)>,
}

impl PentagonChainGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Edges in construction order: each pentagon's cycle followed by its
    /// outgoing bridge.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Bridge `k` is `bridges()[k - 1] = (u_k, x_{k+1,1})`.
    pub fn bridges(&self) -> &[(usize, usize)] {
        &self.bridges
    }

    /// Edge list, one `"u v"` pair per line, 0-based ids.
    pub fn edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edges.len() * 8);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u, v));
        }
        out
    }

    /// Size of the connected component containing `start` when the edge
    /// `removed` (either orientation) is deleted.
    pub fn component_size_without(&self, start: usize, removed: (usize, usize)) -> usize {
        let is_removed = |a: usize, b: usize| (a, b) == removed || (b, a) == removed;
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            for &w in &self.adjacency[v] {
                if !seen[w] && !is_removed(v, w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.component_size_without(0, (usize::MAX, usize::MAX)) == self.vertex_count()
    }
}

pub fn build_graph(blueprint: &ChainBlueprint) -> PentagonChainGraph {
    let n = blueprint.n();
    let mut adjacency = vec![Vec::with_capacity(3); 5 * n];
    let mut edges = Vec::with_capacity(6 * n - 1);
    let mut bridges = Vec::with_capacity(n - 1);
    let mut connect = |a: usize, b: usize, edges: &mut Vec<(usize, usize)>| {
        adjacency[a].push(b);
        adjacency[b].push(a);
        edges.push((a, b));
    };
    for k in 1..=n {
        for j in 1..=5 {
            connect(vertex_id(k, j), vertex_id(k, j % 5 + 1), &mut edges);
        }
        if k < n {
            let bridge = (blueprint.attachment_vertex(k), vertex_id(k + 1, 1));
            connect(bridge.0, bridge.1, &mut edges);
            bridges.push(bridge);
        }
    }
    PentagonChainGraph { n, adjacency, edges, bridges }
}

/// Draws a blueprint with each stochastic step independently Mode1 with
/// probability `p1`.
pub fn sample_blueprint<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    p: &ProbabilityParams<T>,
    rng: &mut R,
) -> Result<ChainBlueprint> {
    if n == 0 {
        return Err(Error::InvalidPentagonCount(n));
    }
    let p1 = p.p1().to_f64();
    let choices = (0..choice_count(n)).map(|_| draw_mode(p1, rng)).collect();
    ChainBlueprint::new(n, choices)
}

#[inline]
pub(crate) fn draw_mode<R: Rng + ?Sized>(p1: f64, rng: &mut R) -> AttachmentMode {
    if rng.random_bool(p1) {
        AttachmentMode::Mode1
    } else {
        AttachmentMode::Mode2
    }
}

/// Every blueprint of size `n` together with its probability.
///
/// Mode sequences are emitted in binary counting order with Mode1 as the
/// zero digit and `choices[0]` as the most significant digit.
pub struct BlueprintEnumeration<T> {
    n: usize,
    steps: usize,
    next: u64,
    end: u64,
    /// `weights[k] = p1^k (1 - p1)^(steps - k)`.
    weights: Vec<T>,
}

impl<T: Scalar> Iterator for BlueprintEnumeration<T> {
    type Item = (ChainBlueprint, T);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let code = self.next;
        self.next += 1;
        let choices: Vec<AttachmentMode> = (0..self.steps)
            .map(|i| {
                let bit = (code >> (self.steps - 1 - i)) & 1;
                if bit == 0 {
                    AttachmentMode::Mode1
                } else {
                    AttachmentMode::Mode2
                }
            })
            .collect();
        let mode1 = choices.iter().filter(|&&m| m == AttachmentMode::Mode1).count();
        let weight = self.weights[mode1].clone();
        Some((ChainBlueprint { n: self.n, choices }, weight))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl<T: Scalar> ExactSizeIterator for BlueprintEnumeration<T> {}

/// Probability weight `p1^k (1 - p1)^(steps - k)` for every Mode1 count `k`.
pub fn mode_weights<T: Scalar>(steps: usize, p: &ProbabilityParams<T>) -> Vec<T> {
    let p1 = p.p1().clone();
    let p2 = p.p2();
    let mut pow1 = vec![T::one(); steps + 1];
    let mut pow2 = vec![T::one(); steps + 1];
    for i in 1..=steps {
        pow1[i] = pow1[i - 1].clone() * p1.clone();
        pow2[i] = pow2[i - 1].clone() * p2.clone();
    }
    (0..=steps).map(|k| pow1[k].clone() * pow2[steps - k].clone()).collect()
}

pub fn enumerate_blueprints<T: Scalar>(
    n: usize,
    p: &ProbabilityParams<T>,
    cap: usize,
) -> Result<BlueprintEnumeration<T>> {
    if n == 0 {
        return Err(Error::InvalidPentagonCount(n));
    }
    if n > cap {
        return Err(Error::EnumerationCapExceeded { n, cap });
    }
    let steps = choice_count(n);
    Ok(BlueprintEnumeration { n, steps, next: 0, end: 1u64 << steps, weights: mode_weights(steps, p) })
}
