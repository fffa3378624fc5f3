mod common;

use num_traits::{ToPrimitive, Zero};
use pentachain::chain::vertex_id;
use pentachain::scalar::exact;
use pentachain::{
    bfs_all_pairs, build_graph, compute_indices, incremental_indices, laplacian_resistance, structured_metrics,
    AttachmentMode, ChainBlueprint, Exact, Index,
};
use proptest::prelude::*;

fn matrix_indices(bp: &ChainBlueprint) -> pentachain::ExactBundle {
    let g = build_graph(bp);
    let (_, res) = structured_metrics::<Exact>(bp);
    compute_indices(&g, &bfs_all_pairs(&g), &res).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn three_engines_agree(bp in common::blueprint(12)) {
        let g = build_graph(&bp);
        let (dist, res) = structured_metrics::<Exact>(&bp);
        prop_assert_eq!(&bfs_all_pairs(&g), &dist);
        let lap = laplacian_resistance(&g).unwrap();
        let gap = lap.max_abs_diff_by(&res.map(|x| x.to_f64().unwrap()), |a, b| (a - b).abs());
        prop_assert!(gap <= 1e-9, "gap {}", gap);
        prop_assert_eq!(compute_indices(&g, &dist, &res).unwrap(), incremental_indices::<Exact>(&bp));
    }

    #[test]
    fn resistance_never_exceeds_distance(bp in common::blueprint(15)) {
        let (dist, res) = structured_metrics::<Exact>(&bp);
        for (u, v, r) in res.pairs() {
            prop_assert!(*r <= Exact::from_integer((*dist.get(u, v).unwrap()).into()));
            prop_assert!(u == v || *r > Exact::zero());
        }
    }

    #[test]
    fn resistance_adds_across_bridges(bp in common::blueprint(10)) {
        let g = build_graph(&bp);
        let (_, res) = structured_metrics::<Exact>(&bp);
        let r = |a: usize, b: usize| res.get(a, b).cloned().unwrap_or_else(Exact::zero);
        for (k, &(u, w)) in g.bridges().iter().enumerate() {
            let split = 5 * (k + 1);
            let (u, w) = if u < w { (u, w) } else { (w, u) };
            for a in 0..split {
                for b in split..g.vertex_count() {
                    prop_assert_eq!(r(a, b), r(a, u) + Exact::from_integer(1.into()) + r(w, b));
                }
            }
        }
    }

    #[test]
    fn anchor_sums_inside_each_pentagon(bp in common::blueprint(8)) {
        let (dist, res) = structured_metrics::<Exact>(&bp);
        for k in 1..=bp.n() {
            for a in 1..=5 {
                let anchor = vertex_id(k, a);
                let ds: u32 = (1..=5).map(|j| dist.get(anchor, vertex_id(k, j)).copied().unwrap_or(0)).sum();
                let rs: Exact = (1..=5).filter_map(|j| res.get(anchor, vertex_id(k, j)).cloned()).sum();
                prop_assert_eq!(ds, 6);
                prop_assert_eq!(rs, exact(4, 1));
            }
        }
    }

    #[test]
    fn recurrence_matches_matrices_up_to_forty(bp in common::blueprint(40)) {
        prop_assert_eq!(matrix_indices(&bp), incremental_indices::<Exact>(&bp));
    }

    #[test]
    fn float_recurrence_tracks_exact(bp in common::blueprint(40)) {
        let e = incremental_indices::<Exact>(&bp);
        let f = incremental_indices::<f64>(&bp);
        for i in Index::ALL {
            let want = e.get(i).to_f64().unwrap();
            prop_assert!((f.get(i) - want).abs() <= 1e-12 * want);
        }
    }
}

#[test]
fn recurrence_matches_matrices_exhaustively_to_eight() {
    for n in 1..=8 {
        for bp in common::all_blueprints(n) {
            assert_eq!(matrix_indices(&bp), incremental_indices::<Exact>(&bp), "{}", bp.to_json());
        }
    }
}

#[test]
fn triple_agreement_exhaustive_to_six() {
    for n in 1..=6 {
        for bp in common::all_blueprints(n) {
            let g = build_graph(&bp);
            let (dist, res) = structured_metrics::<Exact>(&bp);
            assert_eq!(bfs_all_pairs(&g), dist);
            let lap = laplacian_resistance(&g).unwrap();
            assert!(lap.max_abs_diff_by(&res.map(|x| x.to_f64().unwrap()), |a, b| (a - b).abs()) <= 1e-9);
        }
    }
}

#[test]
fn switching_one_step_to_mode2_raises_every_index() {
    for n in 3..=8 {
        for bp in common::all_blueprints(n) {
            let base = incremental_indices::<Exact>(&bp);
            for pos in 0..bp.choices().len() {
                if bp.choices()[pos] != AttachmentMode::Mode1 {
                    continue;
                }
                let mut choices = bp.choices().to_vec();
                choices[pos] = AttachmentMode::Mode2;
                let swapped = incremental_indices::<Exact>(&ChainBlueprint::new(n, choices).unwrap());
                for i in Index::ALL {
                    assert!(swapped.get(i) > base.get(i), "{} at {} in {}", i, pos, bp.to_json());
                }
            }
        }
    }
}

#[test]
fn uniform_chains_grow_cubically() {
    for mode in [AttachmentMode::Mode1, AttachmentMode::Mode2] {
        let small = incremental_indices::<f64>(&ChainBlueprint::uniform(200, mode).unwrap());
        let large = incremental_indices::<f64>(&ChainBlueprint::uniform(400, mode).unwrap());
        for i in Index::ALL {
            let ratio = large.get(i) / small.get(i);
            assert!((ratio / 8.0 - 1.0).abs() < 0.05, "{} {:?} ratio {}", i, mode, ratio);
        }
    }
}

#[test]
fn million_pentagon_chain_is_linear_time() {
    let bp = ChainBlueprint::uniform(1_000_000, AttachmentMode::Mode1).unwrap();
    let b = incremental_indices::<Exact>(&bp);
    assert_eq!(b.n, 1_000_000);
    assert!(*b.get(Index::Gutman) > Exact::zero());
}
