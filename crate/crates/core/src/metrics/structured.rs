use super::{MetricKind, MetricMatrix};
use crate::chain::{vertex_label, ChainBlueprint};
use crate::scalar::Scalar;

/// Number of cycle steps between positions `a` and `b` (1-based) of a pentagon.
fn cyclic_steps(a: usize, b: usize) -> i64 {
    let d = (a as i64 - b as i64).rem_euclid(5);
    d.min(5 - d)
}

/// Shortest-path distance between two positions of one pentagon:
/// `{0, 1, 2, 2, 1}` relative to any anchor.
pub fn pentagon_distance(a: usize, b: usize) -> i64 {
    cyclic_steps(a, b)
}

/// Resistance between two positions of one pentagon, in fifths:
/// `{0, 4, 6, 6, 4}` relative to any anchor (a path of `c` unit resistors in
/// parallel with one of `5 - c`).
pub fn pentagon_resistance(a: usize, b: usize) -> i64 {
    let c = cyclic_steps(a, b);
    c * (5 - c)
}

/// Distance and resistance matrices composed from the per-pentagon tables.
///
/// Every bridge is a cut edge, so for `a` in pentagon `i < j` holding `b`,
/// `m(a, b) = m(a, u_i) + 1 + Σ_{i<k<j} (m(x_{k,1}, u_k) + 1) + m(x_{j,1}, b)`.
/// The middle sum is a difference of prefix sums along the spine.
pub fn structured_metrics<T: Scalar>(blueprint: &ChainBlueprint) -> (MetricMatrix<u32>, MetricMatrix<T>) {
    let n = blueprint.n();
    let attach: Vec<usize> =
        (1..=n).map(|k| if k == 1 || k == n { 1 } else { blueprint.choices()[k - 2].position() }).collect();

    // Spine coordinate of each entry vertex x_{k,1}; resistance kept in fifths.
    let mut entry_dist = vec![0i64; n];
    let mut entry_res = vec![0i64; n];
    for k in 1..n {
        entry_dist[k] = entry_dist[k - 1] + pentagon_distance(1, attach[k - 1]) + 1;
        entry_res[k] = entry_res[k - 1] + pentagon_resistance(1, attach[k - 1]) + 5;
    }

    let compose = |u: usize, v: usize, local: fn(usize, usize) -> i64, entry: &[i64]| -> i64 {
        let (i, ja) = vertex_label(u);
        let (j, jb) = vertex_label(v);
        if i == j {
            return local(ja, jb);
        }
        let (i, ja, j, jb) = if i < j { (i, ja, j, jb) } else { (j, jb, i, ja) };
        let to_exit = local(ja, attach[i - 1]);
        let exit_pos = entry[i - 1] + local(1, attach[i - 1]);
        to_exit + (entry[j - 1] - exit_pos) + local(1, jb)
    };

    let size = 5 * n;
    let dist =
        MetricMatrix::from_fn(size, MetricKind::Distance, |u, v| compose(u, v, pentagon_distance, &entry_dist) as u32);
    let res = MetricMatrix::from_fn(size, MetricKind::Resistance, |u, v| {
        T::from_ratio(compose(u, v, pentagon_resistance, &entry_res), 5)
    });
    (dist, res)
}
