//! O(n) index engine.
//!
//! The chain grows one pentagon at a time. Because the new bridge is a cut
//! edge, every index update only needs four sums anchored at the attachment
//! vertex `u` of the current last pentagon:
//!
//! * `Σ_v d(v)·dist(u, v)` and `Σ_v dist(u, v)`
//! * `Σ_v d(v)·r(u, v)` and `Σ_v r(u, v)`
//!
//! plus the vertex count and the degree total. All step constants are built
//! from the pentagon distance/resistance tables at construction time rather
//! than copied from published recurrences, and resistances are carried in
//! fifths so the whole engine runs in exact `i128` arithmetic.

use num_rational::Ratio;

use super::IndexBundle;
use crate::chain::{AttachmentMode, ChainBlueprint};
use crate::metrics::{pentagon_distance, pentagon_resistance};
use crate::scalar::Scalar;

/// Degree of each position of a freshly attached (terminal) pentagon.
const fn fresh_degree(position: usize) -> i128 {
    if position == 1 {
        3
    } else {
        2
    }
}

/// Anchor sums of one vertex `u`; resistance sums are in fifths.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnchorCarry {
    /// Σ_v d(v)·dist(u, v)
    pub deg_dist: i128,
    /// Σ_v dist(u, v)
    pub dist: i128,
    /// 5·Σ_v d(v)·r(u, v)
    pub deg_res5: i128,
    /// 5·Σ_v r(u, v)
    pub res5: i128,
}

/// Index totals with the resistance-based ones scaled by 5.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RawTotals {
    pub wiener: i128,
    pub gutman: i128,
    pub schultz: i128,
    pub kirchhoff5: i128,
    pub kf_star5: i128,
    pub kf_plus5: i128,
}

impl RawTotals {
    pub fn to_bundle<T: Scalar>(&self, n: usize) -> IndexBundle<T> {
        let fifth = |x: i128| T::from_i128(x) / T::from_i128(5);
        IndexBundle {
            n,
            wiener: T::from_i128(self.wiener),
            gutman: T::from_i128(self.gutman),
            schultz: T::from_i128(self.schultz),
            kirchhoff: fifth(self.kirchhoff5),
            mult_kirchhoff: fifth(self.kf_star5),
            add_kirchhoff: fifth(self.kf_plus5),
        }
    }

    /// Value of `index`, scaled by 5 when it is resistance based.
    pub fn raw(&self, index: super::Index) -> i128 {
        match index {
            super::Index::Gutman => self.gutman,
            super::Index::Schultz => self.schultz,
            super::Index::KfStar => self.kf_star5,
            super::Index::KfPlus => self.kf_plus5,
        }
    }

    /// The four stochastic indices as `f64`, in [`super::Index::ALL`] order.
    pub fn stochastic_f64(&self) -> [f64; 4] {
        [self.gutman as f64, self.schultz as f64, self.kf_star5 as f64 / 5.0, self.kf_plus5 as f64 / 5.0]
    }
}

/// Sums over the pentagon tables that the recurrences need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PentagonSums {
    /// Σ_i g_i over a fresh pentagon (11).
    pub degree: i128,
    /// Σ_i (1 + dist(x_1, x_i)): offset of the cross distances (11).
    pub dist_offset: i128,
    /// Σ_i g_i (1 + dist(x_1, x_i)) (23).
    pub deg_dist_offset: i128,
    /// Σ_i (5 + 5 r(x_1, x_i)) in fifths (45).
    pub res_offset5: i128,
    /// Σ_i g_i (5 + 5 r(x_1, x_i)) in fifths (95).
    pub deg_res_offset5: i128,
    /// Inner-pair totals of a fresh pentagon.
    pub inner: RawTotals,
}

impl PentagonSums {
    pub fn new() -> Self {
        let mut s = PentagonSums {
            degree: 0,
            dist_offset: 0,
            deg_dist_offset: 0,
            res_offset5: 0,
            deg_res_offset5: 0,
            inner: RawTotals::default(),
        };
        for i in 1..=5 {
            let g = fresh_degree(i);
            let d = 1 + pentagon_distance(1, i) as i128;
            let r = 5 + pentagon_resistance(1, i) as i128;
            s.degree += g;
            s.dist_offset += d;
            s.deg_dist_offset += g * d;
            s.res_offset5 += r;
            s.deg_res_offset5 += g * r;
            for j in i + 1..=5 {
                let (gi, gj) = (g, fresh_degree(j));
                let d = pentagon_distance(i, j) as i128;
                let r = pentagon_resistance(i, j) as i128;
                s.inner.wiener += d;
                s.inner.gutman += gi * gj * d;
                s.inner.schultz += (gi + gj) * d;
                s.inner.kirchhoff5 += r;
                s.inner.kf_star5 += gi * gj * r;
                s.inner.kf_plus5 += (gi + gj) * r;
            }
        }
        s
    }

    /// Anchor sums of position `j` restricted to a fresh pentagon.
    fn local_carry(j: usize) -> AnchorCarry {
        let mut c = AnchorCarry::default();
        for i in 1..=5 {
            let d = pentagon_distance(j, i) as i128;
            let r = pentagon_resistance(j, i) as i128;
            c.deg_dist += fresh_degree(i) * d;
            c.dist += d;
            c.deg_res5 += fresh_degree(i) * r;
            c.res5 += r;
        }
        c
    }
}

impl Default for PentagonSums {
    fn default() -> Self {
        Self::new()
    }
}

/// Incremental state of a growing chain.
#[derive(Debug, Clone)]
pub struct IncrementalEngine {
    pentagons: usize,
    vertices: i128,
    degree_total: i128,
    /// Anchor sums for the Mode1 and Mode2 vertex of the last pentagon.
    anchors: [AnchorCarry; 2],
    totals: RawTotals,
    sums: PentagonSums,
    local: [AnchorCarry; 2],
}

impl Default for IncrementalEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl IncrementalEngine {
    /// A lone pentagon.
    pub fn new() -> Self {
        let sums = PentagonSums::new();
        // Every vertex of a lone 5-cycle has degree 2.
        let mut lone = AnchorCarry::default();
        let mut totals = RawTotals::default();
        for i in 1..=5 {
            let d = pentagon_distance(1, i) as i128;
            let r = pentagon_resistance(1, i) as i128;
            lone.deg_dist += 2 * d;
            lone.dist += d;
            lone.deg_res5 += 2 * r;
            lone.res5 += r;
            for j in i + 1..=5 {
                let d = pentagon_distance(i, j) as i128;
                let r = pentagon_resistance(i, j) as i128;
                totals.wiener += d;
                totals.gutman += 4 * d;
                totals.schultz += 4 * d;
                totals.kirchhoff5 += r;
                totals.kf_star5 += 4 * r;
                totals.kf_plus5 += 4 * r;
            }
        }
        IncrementalEngine {
            pentagons: 1,
            vertices: 5,
            degree_total: 10,
            anchors: [lone, lone],
            totals,
            sums,
            local: [
                PentagonSums::local_carry(AttachmentMode::Mode1.position()),
                PentagonSums::local_carry(AttachmentMode::Mode2.position()),
            ],
        }
    }

    pub fn pentagons(&self) -> usize {
        self.pentagons
    }

    pub fn totals(&self) -> &RawTotals {
        &self.totals
    }

    /// Anchor sums of the last pentagon's vertex selected by `mode`.
    pub fn carry(&self, mode: AttachmentMode) -> AnchorCarry {
        self.anchors[mode_slot(mode)]
    }

    /// Attaches a new pentagon by a bridge from the vertex of the last
    /// pentagon selected by `mode`. For a lone pentagon every vertex is
    /// equivalent and `mode` has no effect.
    pub fn attach(&mut self, mode: AttachmentMode) {
        let u = self.anchors[mode_slot(mode)];
        let s = &self.sums;
        let verts = self.vertices;
        // Degree total once u has gained the bridge.
        let deg = self.degree_total + 1;
        let t = &mut self.totals;

        // Pairs inside the old chain that involve u: d(u) grew by one.
        t.gutman += u.deg_dist;
        t.schultz += u.dist;
        t.kf_star5 += u.deg_res5;
        t.kf_plus5 += u.res5;

        // Old vertex v against new x_i: metric(u, v) + bridge + metric(x_1, x_i).
        t.wiener += 5 * u.dist + verts * s.dist_offset;
        t.gutman += s.degree * u.deg_dist + deg * s.deg_dist_offset;
        t.schultz += 5 * u.deg_dist + deg * s.dist_offset + s.degree * u.dist + verts * s.deg_dist_offset;
        t.kirchhoff5 += 5 * u.res5 + verts * s.res_offset5;
        t.kf_star5 += s.degree * u.deg_res5 + deg * s.deg_res_offset5;
        t.kf_plus5 += 5 * u.deg_res5 + deg * s.res_offset5 + s.degree * u.res5 + verts * s.deg_res_offset5;

        t.wiener += s.inner.wiener;
        t.gutman += s.inner.gutman;
        t.schultz += s.inner.schultz;
        t.kirchhoff5 += s.inner.kirchhoff5;
        t.kf_star5 += s.inner.kf_star5;
        t.kf_plus5 += s.inner.kf_plus5;

        for (slot, mode) in [AttachmentMode::Mode1, AttachmentMode::Mode2].into_iter().enumerate() {
            let j = mode.position();
            let hop = 1 + pentagon_distance(1, j) as i128;
            let hop5 = 5 + pentagon_resistance(1, j) as i128;
            let local = self.local[slot];
            self.anchors[slot] = AnchorCarry {
                deg_dist: u.deg_dist + deg * hop + local.deg_dist,
                dist: u.dist + verts * hop + local.dist,
                deg_res5: u.deg_res5 + deg * hop5 + local.deg_res5,
                res5: u.res5 + verts * hop5 + local.res5,
            };
        }

        self.pentagons += 1;
        self.vertices += 5;
        self.degree_total = deg + s.degree;
    }

    /// Runs a whole blueprint from a lone pentagon.
    pub fn from_blueprint(blueprint: &ChainBlueprint) -> Self {
        let mut engine = Self::new();
        engine.extend_to(blueprint.n(), blueprint.choices().iter().copied());
        engine
    }

    /// Grows a lone pentagon to `n` pentagons, taking the attachment mode of
    /// pentagons `2..n` from `modes`.
    pub(crate) fn extend_to(&mut self, n: usize, modes: impl IntoIterator<Item = AttachmentMode>) {
        debug_assert_eq!(self.pentagons, 1);
        if n >= 2 {
            self.attach(AttachmentMode::Mode1);
        }
        for mode in modes.into_iter().take(n.saturating_sub(2)) {
            self.attach(mode);
        }
    }

    pub fn bundle<T: Scalar>(&self) -> IndexBundle<T> {
        self.totals.to_bundle(self.pentagons)
    }
}

fn mode_slot(mode: AttachmentMode) -> usize {
    match mode {
        AttachmentMode::Mode1 => 0,
        AttachmentMode::Mode2 => 1,
    }
}

/// O(n) index values of a blueprint; exact whenever `T` is.
pub fn incremental_indices<T: Scalar>(blueprint: &ChainBlueprint) -> IndexBundle<T> {
    IncrementalEngine::from_blueprint(blueprint).bundle()
}

/// Affine function `slope·n + intercept` with exact coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineInN {
    pub slope: Ratio<i128>,
    pub intercept: Ratio<i128>,
}

impl AffineInN {
    pub fn integer(slope: i128, intercept: i128) -> Self {
        AffineInN { slope: Ratio::from_integer(slope), intercept: Ratio::from_integer(intercept) }
    }
}

/// Increment of the four per-index carries, used by the variance analysis:
/// `E = 12·Σ d(v)dist(u,v)`, `F = Σ (5d(v)+12)dist(u,v)`,
/// `H = 12·Σ d(v)r(u,v)`, `I = Σ (5d(v)+12)r(u,v)`.
/// Returns the carry seed at `n = 1` and the increment `carry_n - carry_{n-1}`
/// when pentagon `n` is attached and anchored by `mode`.
pub fn carry_recurrence(index: super::Index, mode: AttachmentMode) -> (Ratio<i128>, AffineInN) {
    let combine = |c: AnchorCarry| -> Ratio<i128> {
        let (dd, d, dr, r) = (c.deg_dist, c.dist, c.deg_res5, c.res5);
        match index {
            super::Index::Gutman => Ratio::from_integer(12 * dd),
            super::Index::Schultz => Ratio::from_integer(5 * dd + 12 * d),
            super::Index::KfStar => Ratio::new(12 * dr, 5),
            super::Index::KfPlus => Ratio::new(5 * dr + 12 * r, 5),
        }
    };
    // Read the increment off the engine at two consecutive steps; it is affine in n.
    let increment_at = |n: usize| -> Ratio<i128> {
        let mut engine = IncrementalEngine::new();
        engine.extend_to(n - 1, std::iter::repeat(mode));
        let before = combine(engine.carry(mode));
        engine.attach(mode);
        combine(engine.carry(mode)) - before
    };
    let seed = combine(IncrementalEngine::new().carry(mode));
    let (at3, at4) = (increment_at(3), increment_at(4));
    let slope = at4 - at3;
    (seed, AffineInN { slope, intercept: at3 - slope * Ratio::from_integer(3) })
}

/// Constant part of the one-step index update
/// `X(PG_{n+1}) = X(PG_n) + carry_n + (slope·n + intercept)`.
pub fn step_constant(index: super::Index) -> AffineInN {
    let s = PentagonSums::new();
    // Degree total after the bridge is 12n - 1 and the old chain has 5n vertices.
    let (a, b) = match index {
        super::Index::Gutman => (12 * s.deg_dist_offset, s.inner.gutman - s.deg_dist_offset),
        super::Index::Schultz => (12 * s.dist_offset + 5 * s.deg_dist_offset, s.inner.schultz - s.dist_offset),
        super::Index::KfStar => (12 * s.deg_res_offset5, s.inner.kf_star5 - s.deg_res_offset5),
        super::Index::KfPlus => (12 * s.res_offset5 + 5 * s.deg_res_offset5, s.inner.kf_plus5 - s.res_offset5),
    };
    if index.is_resistance_based() {
        AffineInN { slope: Ratio::new(a, 5), intercept: Ratio::new(b, 5) }
    } else {
        AffineInN::integer(a, b)
    }
}
