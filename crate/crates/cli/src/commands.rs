use std::io::Read;

use pentachain::closed_forms::{grid_csv, moment_report, Formula, MonteCarloOptions, ReportOptions};
use pentachain::distribution::{
    block_rng, exact_distribution, monte_carlo, normality_tests, sample_totals, samples_csv, NormalityPlan,
    NormalityResult, SamplingPlan,
};
use pentachain::{
    bfs_all_pairs, build_graph, compute_indices, incremental_indices, laplacian_resistance, sample_blueprint,
    structured_metrics, ChainBlueprint, Exact, Index, ProbabilityParams, Scalar,
};
use serde_json::json;

use crate::args::*;
use crate::CliError;

/// Entrywise tolerance between the Laplacian and structured resistances.
pub const RESISTANCE_TOLERANCE: f64 = 1e-9;

pub struct Context {
    pub enum_cap: usize,
    pub workers: usize,
}

fn load_blueprint(src: &BlueprintSource) -> Result<ChainBlueprint, CliError> {
    if let (Some(n), Some(mode)) = (src.n, src.uniform) {
        return Ok(ChainBlueprint::uniform(n, mode)?);
    }
    let mut text = String::new();
    match &src.input {
        Some(path) if path.as_os_str() != "-" => {
            text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {}", path.display(), e)))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Failure(e.to_string()))?;
        }
    }
    Ok(ChainBlueprint::from_json(&text)?)
}

pub fn generate(a: &GenerateArgs) -> Result<String, CliError> {
    let p = ProbabilityParams::new(a.p1.exact.clone())?;
    let mut rng = block_rng(a.seed, 0);
    let bp = sample_blueprint(a.n, &p, &mut rng)?;
    let g = build_graph(&bp);
    Ok(match a.format {
        TextOrJson::Text => format!("{}\n{}", bp.to_json(), g.edge_list()),
        TextOrJson::Json => {
            let edges: Vec<[usize; 2]> = g.edges().iter().map(|&(u, v)| [u, v]).collect();
            let doc = json!({ "blueprint": bp, "vertices": g.vertex_count(), "edges": edges });
            format!("{}\n", doc)
        }
    })
}

/// Runs every engine on `bp` and reports the first disagreement.
pub fn cross_check(bp: &ChainBlueprint) -> Result<(), CliError> {
    let fail = |what: String| CliError::Disagreement(format!("{}; blueprint {}", what, bp.to_json()));
    let g = build_graph(bp);
    let (dist, res) = structured_metrics::<Exact>(bp);
    let bfs = bfs_all_pairs(&g);
    if let Some((u, v, d)) = bfs.pairs().find(|&(u, v, d)| dist.get(u, v) != Some(d)) {
        return Err(fail(format!("distance ({}, {}): bfs {} vs structured {:?}", u, v, d, dist.get(u, v))));
    }
    let lap = laplacian_resistance(&g)?;
    let gap = lap.max_abs_diff_by(&res.map(|x| x.to_f64()), |a, b| (a - b).abs());
    if gap > RESISTANCE_TOLERANCE {
        return Err(fail(format!("resistance: laplacian and structured differ by {:e}", gap)));
    }
    let matrix = compute_indices(&g, &bfs, &res)?;
    let fast = incremental_indices::<Exact>(bp);
    if matrix != fast {
        return Err(fail(format!("indices: matrix {} vs recurrence {}", matrix.to_json(), fast.to_json())));
    }
    Ok(())
}

pub fn indices(a: &IndicesArgs) -> Result<String, CliError> {
    let bp = load_blueprint(&a.source)?;
    if bp.n() <= a.verify_cap {
        cross_check(&bp)?;
    }
    Ok(format!("{}\n", incremental_indices::<Exact>(&bp).to_json()))
}

fn report_ns(a: &ReportArgs) -> Vec<usize> {
    if let Some(m) = a.nmax {
        return (1..=m).collect();
    }
    a.n.clone().or_else(|| a.grid.clone()).map(|l| l.0).unwrap_or_else(|| (1..=8).collect())
}

fn bare<S: serde::Serialize>(v: &S) -> String {
    serde_json::to_string(v).expect("serializes").trim_matches('"').to_string()
}

fn normality_output(results: &[NormalityResult], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => format!("{}\n", serde_json::to_string_pretty(results).expect("serializes")),
        ReportFormat::Csv | ReportFormat::Pretty => {
            let mut out = String::from("index,n,p1,m,seed,ks_statistic,threshold,passed,standardization,formula\n");
            for r in results {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.index,
                    r.n,
                    r.p1,
                    r.m,
                    r.seed,
                    r.ks_statistic,
                    r.threshold,
                    r.passed,
                    bare(&r.standardization),
                    bare(&r.formula)
                ));
            }
            out
        }
    }
}

fn normality_plan(
    sampling: SamplingPlan,
    p1_text: &str,
    alpha: f64,
    standardization: StandardizeBy,
    formula: Formula,
) -> Result<NormalityPlan, CliError> {
    if sampling.n <= 2 {
        return Err(CliError::Usage(format!(
            "normality needs n >= 3 (the chain is deterministic below), got n = {}",
            sampling.n
        )));
    }
    if sampling.p1 <= 0.0 || sampling.p1 >= 1.0 {
        return Err(CliError::Usage(format!("normality needs 0 < p1 < 1, got {}", p1_text)));
    }
    pentachain::distribution::ks_critical_value(alpha)?;
    Ok(NormalityPlan { sampling, standardization: standardization.into(), formula, alpha })
}

pub fn report(a: &ReportArgs, ctx: &Context) -> Result<String, CliError> {
    let ns = report_ns(a);
    let ps = a.p1_values();
    let formula = a.formula();
    let rational = ps.iter().all(|p| p.rational);
    let exact_ps: Vec<Exact> = ps.iter().map(|p| p.exact.clone()).collect();
    let workers = a.workers.unwrap_or(ctx.workers);

    if a.normality {
        if ns.len() != 1 || ps.len() != 1 {
            return Err(CliError::Usage("--normality takes a single --n and a single --p1".into()));
        }
        let samples = if a.samples == 0 { 10_000 } else { a.samples };
        let sampling = SamplingPlan { n: ns[0], p1: ps[0].exact.to_f64(), samples, seed: a.seed, workers };
        let plan = normality_plan(sampling, &ps[0].text, a.alpha, a.standardization, formula)?;
        let results = normality_tests(&Index::ALL, &plan)?;
        return Ok(normality_output(&results, a.format));
    }

    if a.expect_only {
        return Ok(if rational {
            grid_csv::<Exact>(&ns, &exact_ps, formula)
        } else {
            let floats: Vec<f64> = exact_ps.iter().map(|p| p.to_f64()).collect();
            grid_csv::<f64>(&ns, &floats, formula)
        });
    }

    let options = ReportOptions {
        oracle_cap: Some(ctx.enum_cap),
        monte_carlo: (a.samples > 0).then_some(MonteCarloOptions { samples: a.samples, seed: a.seed, workers }),
    };
    if let Some(&too_big) = ns.iter().find(|&&n| n > ctx.enum_cap) {
        return Err(CliError::Usage(format!(
            "n = {} exceeds the enumeration cap of {} (use --expect-only, --enum-cap or PENTACHAIN_ENUM_CAP)",
            too_big, ctx.enum_cap
        )));
    }
    let report = if rational {
        moment_report::<Exact>(&ns, &exact_ps, &options)?
    } else {
        moment_report::<f64>(&ns, &exact_ps, &options)?
    };
    let output = match a.format {
        ReportFormat::Json => format!("{}\n", report.to_json()),
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Pretty => report.to_pretty(),
    };
    let bad = report.unexplained();
    if !bad.is_empty() {
        let list: Vec<String> = bad.iter().map(|r| format!("{} n={} p1={}", r.index, r.n, r.p1)).collect();
        return Err(CliError::Mismatch { output, detail: format!("unexplained mismatch: {}", list.join("; ")) });
    }
    Ok(output)
}

pub fn distribution(a: &DistributionArgs, ctx: &Context) -> Result<String, CliError> {
    let p = ProbabilityParams::new(a.p1.exact.clone())?;
    let d = exact_distribution::<Exact>(a.index, a.n, &p, ctx.enum_cap)?;
    Ok(match a.format {
        CsvOrJson::Csv => d.to_csv(),
        CsvOrJson::Json => {
            let support: Vec<_> =
                d.support.iter().map(|(v, q)| json!({ "value": v.to_text(), "probability": q.to_text() })).collect();
            let doc = json!({
                "index": d.index,
                "n": d.n,
                "p1": d.p1.to_text(),
                "mean": d.mean.to_text(),
                "variance": d.variance.to_text(),
                "support": support,
            });
            format!("{}\n", doc)
        }
    })
}

pub fn sample(a: &SampleArgs, ctx: &Context) -> Result<String, CliError> {
    let plan = SamplingPlan {
        n: a.n,
        p1: a.p1.exact.to_f64(),
        samples: a.samples,
        seed: a.seed,
        workers: a.workers.unwrap_or(ctx.workers),
    };
    Ok(match a.format {
        CsvOrJson::Csv => samples_csv(a.index, &sample_totals(&plan)?),
        CsvOrJson::Json => {
            format!("{}\n", serde_json::to_string(&monte_carlo(&Index::ALL, &plan)?).expect("serializes"))
        }
    })
}

pub fn normality(a: &NormalityArgs, ctx: &Context) -> Result<String, CliError> {
    let sampling = SamplingPlan {
        n: a.n,
        p1: a.p1.exact.to_f64(),
        samples: a.samples,
        seed: a.seed,
        workers: a.workers.unwrap_or(ctx.workers),
    };
    let plan = normality_plan(sampling, &a.p1.text, a.alpha, a.standardization, a.formula)?;
    let indices = a.index.map(|i| vec![i]).unwrap_or_else(|| Index::ALL.to_vec());
    let results = normality_tests(&indices, &plan)?;
    Ok(if results.len() == 1 {
        format!("{}\n", results[0].to_json())
    } else {
        format!("{}\n", serde_json::to_string(&results).expect("serializes"))
    })
}

pub fn matrix(a: &MatrixArgs) -> Result<String, CliError> {
    let bp = load_blueprint(&a.source)?;
    let g = build_graph(&bp);
    match (a.kind, a.engine) {
        (MetricKindArg::Distance, EngineArg::Structured) => Ok(structured_metrics::<Exact>(&bp).0.to_csv()),
        (MetricKindArg::Distance, EngineArg::Bfs) => Ok(bfs_all_pairs(&g).to_csv()),
        (MetricKindArg::Resistance, EngineArg::Structured) => Ok(structured_metrics::<Exact>(&bp).1.to_csv()),
        (MetricKindArg::Resistance, EngineArg::Laplacian) => Ok(laplacian_resistance(&g)?.to_csv()),
        (kind, engine) => Err(CliError::Usage(format!("engine {:?} does not compute {:?} matrices", engine, kind))),
    }
}
