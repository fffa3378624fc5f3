use std::collections::VecDeque;

use super::{MetricKind, MetricMatrix};
use crate::chain::PentagonChainGraph;

const UNSEEN: u32 = u32::MAX;

/// Shortest-path lengths by one breadth-first search per source, O(V·E).
pub fn bfs_all_pairs(g: &PentagonChainGraph) -> MetricMatrix<u32> {
    let n = g.vertex_count();
    let mut rows = vec![UNSEEN; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = &mut rows[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            let next = row[v] + 1;
            for &w in g.neighbors(v) {
                if row[w] == UNSEEN {
                    row[w] = next;
                    queue.push_back(w);
                }
            }
        }
    }
    MetricMatrix::from_fn(n, MetricKind::Distance, |u, v| rows[u * n + v])
}
