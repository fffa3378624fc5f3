//! Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{ToPrimitive, Zero};
use pentachain::closed_forms::{
    discrepancies, expected_index_with, variance_index_with, within_tolerance, Quantity, MATCH_TOLERANCE,
};
use pentachain::distribution::{
    block_rng, exact_distributions, ks_critical_value, monte_carlo, normality_tests, NormalityPlan, SamplingPlan,
    Standardization,
};
use pentachain::scalar::exact;
use pentachain::{
    bfs_all_pairs, build_graph, compute_indices, incremental_indices, laplacian_resistance, sample_blueprint,
    structured_metrics, AttachmentMode, ChainBlueprint, Exact, Formula, Index, ProbabilityParams,
};

const RESISTANCE_TOL: f64 = 1e-9;
const MC_MEAN_SE: f64 = 4.0;
const MC_VARIANCE_REL: f64 = 0.05;
const KS_ALPHA: f64 = 0.01;
const SPEEDUP_MIN: f64 = 3.0;

type Check = fn() -> Verdict;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn timed<R>(f: impl FnOnce() -> R) -> (R, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

fn grid_ps() -> [Exact; 3] {
    [exact(1, 5), exact(1, 2), exact(4, 5)]
}

fn uniform(n: usize, mode: AttachmentMode) -> ChainBlueprint {
    ChainBlueprint::uniform(n, mode).unwrap()
}

fn all_blueprints(n: usize) -> Vec<ChainBlueprint> {
    let steps = n.saturating_sub(2);
    (0..1u32 << steps)
        .map(|code| {
            let choices = (0..steps)
                .map(|i| if code >> i & 1 == 0 { AttachmentMode::Mode1 } else { AttachmentMode::Mode2 })
                .collect();
            ChainBlueprint::new(n, choices).unwrap()
        })
        .collect()
}

fn base_values() -> Verdict {
    let (ok, t) = timed(|| {
        let bp = uniform(1, AttachmentMode::Mode1);
        let fast = incremental_indices::<Exact>(&bp);
        let g = build_graph(&bp);
        let (_, res) = structured_metrics::<Exact>(&bp);
        let slow = compute_indices(&g, &bfs_all_pairs(&g), &res).unwrap();
        let want = [(Index::Gutman, 60), (Index::Schultz, 60), (Index::KfStar, 40), (Index::KfPlus, 40)];
        want.iter().all(|&(i, v)| *fast.get(i) == exact(v, 1) && *slow.get(i) == exact(v, 1))
    });
    verdict(ok && t < Duration::from_secs(1), format!("Gut=S=60, Kf*=Kf+=40 exactly; {:?}", t))
}

fn engine_agreement() -> Verdict {
    let mut rng = block_rng(2, 0);
    let half = ProbabilityParams::new(exact(1, 2)).unwrap();
    let mut blueprints: Vec<ChainBlueprint> =
        (0..50).map(|k| sample_blueprint(1 + k % 12, &half, &mut rng).unwrap()).collect();
    let random = blueprints.len();
    blueprints.extend((1..=6).flat_map(all_blueprints));
    let ((failures, worst), t) = timed(|| {
        let mut failures = Vec::new();
        let mut worst = 0.0f64;
        for bp in &blueprints {
            let g = build_graph(bp);
            let (dist, res) = structured_metrics::<Exact>(bp);
            let bfs = bfs_all_pairs(&g);
            let gap = laplacian_resistance(&g)
                .unwrap()
                .max_abs_diff_by(&res.map(|x| x.to_f64().unwrap()), |a, b| (a - b).abs());
            worst = worst.max(gap);
            let same = bfs == dist && compute_indices(&g, &dist, &res).unwrap() == incremental_indices::<Exact>(bp);
            if !same || gap > RESISTANCE_TOL {
                failures.push(bp.to_json());
            }
        }
        (failures, worst)
    });
    verdict(
        failures.is_empty() && t < Duration::from_secs(120),
        format!(
            "{} random (n <= 12) + {} exhaustive (n <= 6) blueprints, {} disagreements, max resistance gap {:.1e}; {:?}",
            random,
            blueprints.len() - random,
            failures.len(),
            worst,
            t
        ),
    )
}

/// Oracle moments on the acceptance grid, keyed by (index, n, p1 position).
fn oracle_grid() -> Vec<(Index, usize, Exact, Exact, Exact)> {
    let mut out = Vec::new();
    for n in 1..=8 {
        for p in grid_ps() {
            let params = ProbabilityParams::new(p.clone()).unwrap();
            for d in exact_distributions::<Exact>(n, &params, 22).unwrap() {
                out.push((d.index, n, p.clone(), d.mean, d.variance));
            }
        }
    }
    out
}

fn degenerate_exact(f: Formula) -> (usize, usize) {
    let mut ok = 0;
    let mut total = 0;
    for n in 1..=50 {
        for (p, mode) in [(exact(1, 1), AttachmentMode::Mode1), (exact(0, 1), AttachmentMode::Mode2)] {
            let chain = incremental_indices::<Exact>(&uniform(n, mode));
            for i in Index::ALL {
                total += 1;
                ok += usize::from(expected_index_with(f, i, n, &p) == *chain.get(i));
            }
        }
    }
    (ok, total)
}

fn expectations() -> Verdict {
    let ((ok, detail), t) = timed(|| {
        let grid = oracle_grid();
        let count = |f: Formula| {
            grid.iter().filter(|(i, n, p, mean, _)| within_tolerance(&expected_index_with(f, *i, *n, p), mean)).count()
        };
        let published = count(Formula::Published);
        let verified = count(Formula::Verified);
        let (deg_pub, deg_total) = degenerate_exact(Formula::Published);
        let (deg_ver, _) = degenerate_exact(Formula::Verified);
        let failing: Vec<Index> = Index::ALL
            .into_iter()
            .filter(|&i| {
                grid.iter().any(|(j, n, p, mean, _)| {
                    *j == i && !within_tolerance(&expected_index_with(Formula::Published, i, *n, p), mean)
                })
            })
            .collect();
        let named: Vec<String> = discrepancies()
            .into_iter()
            .filter(|d| !d.agrees && d.quantity == Some(Quantity::Expectation))
            .map(|d| d.item)
            .collect();
        let all_named = failing.iter().all(|i| named.contains(&format!("expected {}", i)));
        let published_ok = published == grid.len() && deg_pub == deg_total;
        let fallback_ok = verified == grid.len() && deg_ver == deg_total && all_named;
        (
            published_ok || fallback_ok,
            format!(
                "published {}/{} grid, {}/{} degenerate; verified {}/{} grid, {}/{} degenerate; discrepancy report names {:?}",
                published,
                grid.len(),
                deg_pub,
                deg_total,
                verified,
                grid.len(),
                deg_ver,
                deg_total,
                named
            ),
        )
    });
    verdict(
        ok && grid_size_ok() && t < Duration::from_secs(60),
        format!("{}; tolerance {:e} rel; {:?}", detail, MATCH_TOLERANCE, t),
    )
}

fn grid_size_ok() -> bool {
    8 * grid_ps().len() * Index::ALL.len() == 96
}

fn variances() -> Verdict {
    let ((matches, total, zeros, spot), t) = timed(|| {
        let grid = oracle_grid();
        let matches = grid
            .iter()
            .filter(|(i, n, p, _, var)| within_tolerance(&variance_index_with(Formula::Published, *i, *n, p), var))
            .count();
        let mut zeros = true;
        for i in Index::ALL {
            for n in 1..=50 {
                for p in [exact(0, 1), exact(1, 1)] {
                    zeros &= variance_index_with(Formula::Published, i, n, &p).is_zero();
                }
            }
            for n in 1..=2 {
                for p in grid_ps() {
                    zeros &= variance_index_with(Formula::Published, i, n, &p).is_zero();
                }
            }
        }
        let spot = variance_index_with(Formula::Published, Index::Gutman, 3, &exact(1, 2));
        (matches, grid.len(), zeros, spot)
    });
    let ok = matches == total && zeros && spot == exact(5184, 1) && t < Duration::from_secs(60);
    verdict(
        ok,
        format!(
            "published {}/{} grid, zero where deterministic: {}, Var Gut(PG_3) = {}; {:?}",
            matches, total, zeros, spot, t
        ),
    )
}

fn monte_carlo_consistency() -> Verdict {
    let plan = SamplingPlan { n: 10, p1: 0.5, samples: 100_000, seed: 20_240, workers: 4 };
    let half = 0.5f64;
    let (stats, t) = timed(|| monte_carlo(&Index::ALL, &plan).unwrap());
    let mut ok = t < Duration::from_secs(30);
    let mut parts = Vec::new();
    for s in &stats {
        let var = variance_index_with(Formula::Published, s.index, 10, &half);
        let mean = expected_index_with(Formula::Reconciled, s.index, 10, &half);
        let published = expected_index_with(Formula::Published, s.index, 10, &half);
        let z = (s.mean - mean) / s.standard_error(var);
        let z_pub = (s.mean - published) / s.standard_error(var);
        let rel = (s.variance() - var).abs() / var;
        ok &= z.abs() <= MC_MEAN_SE && rel <= MC_VARIANCE_REL;
        parts.push(format!("{} z={:+.2} (published mean z={:+.1}) var rel {:.3}", s.index, z, z_pub, rel));
    }
    verdict(ok, format!("{}; {:?}", parts.join(", "), t))
}

fn ks(index: Index, n: usize, seed: u64, formula: Formula) -> f64 {
    let plan = NormalityPlan {
        sampling: SamplingPlan { n, p1: 0.5, samples: 10_000, seed, workers: 4 },
        standardization: Standardization::ClosedForm,
        formula,
        alpha: KS_ALPHA,
    };
    normality_tests(&[index], &plan).unwrap()[0].ks_statistic
}

fn normality() -> Verdict {
    let threshold = ks_critical_value(KS_ALPHA).unwrap() / (10_000f64).sqrt();
    let ((ok, detail), t) = timed(|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for i in Index::ALL {
            let d = ks(i, 100, 1, Formula::Reconciled);
            let d_pub = ks(i, 100, 1, Formula::Published);
            let medians: Vec<f64> = [5usize, 20, 100]
                .iter()
                .map(|&n| {
                    let mut v: Vec<f64> = (1..=5).map(|seed| ks(i, n, seed, Formula::Reconciled)).collect();
                    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    v[2]
                })
                .collect();
            let falling = medians[0] > medians[1] && medians[1] > medians[2];
            ok &= d < threshold && falling;
            parts.push(format!(
                "{} D={:.4} (published moments {:.4}) medians {:.3}/{:.3}/{:.4}",
                i, d, d_pub, medians[0], medians[1], medians[2]
            ));
        }
        (ok, parts.join(", "))
    });
    verdict(ok && t < Duration::from_secs(120), format!("threshold {:.4}; {}; {:?}", threshold, detail, t))
}

fn best_of<R>(runs: usize, mut f: impl FnMut() -> R) -> Duration {
    (0..runs).map(|_| timed(&mut f).1).min().unwrap()
}

fn performance() -> Verdict {
    let mut rng = block_rng(3, 0);
    let half = ProbabilityParams::new(0.5f64).unwrap();
    let million = sample_blueprint(1_000_000, &half, &mut rng).unwrap();
    let two_million = sample_blueprint(2_000_000, &half, &mut rng).unwrap();
    let t1 = best_of(3, || incremental_indices::<Exact>(&million));
    let t2 = best_of(3, || incremental_indices::<Exact>(&two_million));
    let linear = t2.as_secs_f64() / t1.as_secs_f64();
    let fast_ok = t1 < Duration::from_secs(1) && linear < 3.0;

    let plan = |workers| SamplingPlan { n: 100, p1: 0.5, samples: 100_000, seed: 1, workers };
    let serial = best_of(2, || monte_carlo(&Index::ALL, &plan(1)).unwrap());
    let parallel = best_of(2, || monte_carlo(&Index::ALL, &plan(4)).unwrap());
    let speedup = serial.as_secs_f64() / parallel.as_secs_f64();
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    verdict(
        fast_ok && speedup >= SPEEDUP_MIN,
        format!(
            "n=1e6 recurrence {:?} (2e6/1e6 time ratio {:.2}); Monte Carlo m=1e5 n=100: 1 worker {:?}, 4 workers {:?}, speedup {:.2}x (need {}x, {} CPU(s) available)",
            t1, linear, serial, parallel, speedup, SPEEDUP_MIN, cores
        ),
    )
}

fn reproducibility() -> Verdict {
    let commands: [&[&str]; 5] = [
        &["generate", "--n", "40", "--p1", "0.5", "--seed", "7"],
        &["sample", "--n", "20", "--samples", "5000", "--seed", "11"],
        &["sample", "--n", "20", "--samples", "5000", "--seed", "11", "--format", "json"],
        &["normality", "--n", "50", "--samples", "5000", "--seed", "3"],
        &["report", "--nmax", "6", "--p1", "0.3", "--samples", "2000", "--seed", "5"],
    ];
    let run = |args: &[&str], workers: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_pentachain"));
        c.args(args);
        if let Some(w) = workers {
            c.args(["--workers", w]);
        }
        let o = c.output().unwrap();
        (o.status.success(), o.stdout)
    };
    let mut bad = Vec::new();
    for args in commands {
        let takes_workers = args[0] != "generate";
        let reference = run(args, takes_workers.then_some("1"));
        let mut same = reference.0 && run(args, takes_workers.then_some("1")) == reference;
        if takes_workers {
            same &= run(args, Some("4")) == reference;
        }
        if !same {
            bad.push(args.join(" "));
        }
    }
    verdict(
        bad.is_empty(),
        format!("{} seeded commands, two runs each, workers 1 and 4; differing: {:?}", commands.len(), bad),
    )
}

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("base values", base_values),
        ("engine triple agreement", engine_agreement),
        ("expectation polynomials", expectations),
        ("variance polynomials", variances),
        ("Monte Carlo consistency", monte_carlo_consistency),
        ("normality", normality),
        ("performance", performance),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        failed += usize::from(!v.pass);
        println!("criterion {} {}: {} - {}", k + 1, name, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
