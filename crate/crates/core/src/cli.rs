//! Command implementations behind the `backcloth` executable. Each command
//! writes its artifacts into an output directory together with a
//! `manifest.json` that records everything needed to replay it.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::baselines::BaselineSpec;
use crate::config::{RunConfig, SeedMode, SweepSpec};
use crate::dynamics::{self, SimParams};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::io::report::{write_centralities_csv, write_comparison_csv, write_histogram_csv, write_metrics_csv};
use crate::io::{self as gio, ComparisonReport, EdgeFormat, LogLogSeries, Metric, ObjectiveWeights};
use crate::metrics::{degree_histogram, Direction, MetricSettings, MetricsReport};
use crate::rng;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    File::create(&path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn emit(dir: &Path, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let mut w = create(dir, name)?;
    f(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(dir.join(name), e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_manifest(dir: &Path, body: serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(&body).map_err(|e| Error::Runtime(e.to_string()))?;
    emit(dir, "manifest.json", |w| writeln!(w, "{text}"))
}

fn series(dir: &Path, name: &str, s: &LogLogSeries, header: (&str, &str)) -> Result<()> {
    if let Some(w) = &s.warning {
        log::warn!("{name}: {w}");
    }
    emit(dir, name, |w| gio::write_series_csv(s, header, w))
}

/// Report, centralities, degree histograms and log-log series.
fn write_report_artifacts(dir: &Path, graph: &DirectedGraph, report: &MetricsReport, bins: usize) -> Result<()> {
    let bins = (bins > 0).then_some(bins);
    emit(dir, "metrics.txt", |w| w.write_all(gio::report_text(report).as_bytes()))?;
    emit(dir, "metrics.csv", |w| write_metrics_csv(report, w))?;
    for (dir_kind, stem) in [(Direction::In, "in_degree"), (Direction::Out, "out_degree")] {
        let h = degree_histogram(graph, dir_kind);
        emit(dir, &format!("{stem}.csv"), |w| write_histogram_csv(&h, w))?;
        let s = gio::loglog_from_histogram(&h, bins);
        series(dir, &format!("{stem}_loglog.csv"), &s, ("degree", "frequency"))?;
    }
    if let Some(c) = &report.centralities {
        emit(dir, "centralities.csv", |w| write_centralities_csv(report, w))?;
        for (values, stem) in [
            (&c.eigenvector, "eigenvector"),
            (&c.betweenness, "betweenness"),
            (&c.closeness, "closeness"),
        ] {
            let s = gio::loglog_from_values(values, bins);
            series(dir, &format!("{stem}_loglog.csv"), &s, (stem, "frequency"))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct GrowSummary {
    pub turns: usize,
    pub nodes: usize,
    pub edges: usize,
    pub wall_seconds: f64,
    pub report: MetricsReport,
}

/// Grows a network and writes `edges.txt`, `turns.csv`, the metric artifacts
/// and the manifest.
pub fn cmd_grow(config: &RunConfig) -> Result<GrowSummary> {
    config.validate()?;
    let dir = &config.output.dir;
    ensure_dir(dir)?;
    let started = Instant::now();
    let params = config.params();
    log::info!("growing to {} nodes (seed {})", params.target_nodes, params.seed);
    let out = dynamics::run(&params)?;
    let grown = started.elapsed().as_secs_f64();
    log::info!(
        "grown in {grown:.2}s: {} nodes, {} edges",
        out.graph.node_count(),
        out.graph.edge_count()
    );
    gio::write_edge_list(&out.graph, dir.join("edges.txt"))?;
    emit(dir, "turns.csv", |w| dynamics::write_ledger_csv(&out.ledger, w))?;
    let report = MetricsReport::compute(&out.graph, &config.metrics);
    write_report_artifacts(dir, &out.graph, &report, config.output.loglog_bins)?;
    let wall_seconds = started.elapsed().as_secs_f64();
    write_manifest(
        dir,
        json!({
            "command": "grow",
            "version": VERSION,
            "seed": params.seed,
            "config": config,
            "turns": out.ledger.len(),
            "nodes": out.graph.node_count(),
            "edges": out.graph.edge_count(),
            "grow_seconds": grown,
            "wall_seconds": wall_seconds,
        }),
    )?;
    Ok(GrowSummary {
        turns: out.ledger.len(),
        nodes: out.graph.node_count(),
        edges: out.graph.edge_count(),
        wall_seconds,
        report,
    })
}

fn load(path: &Path, format: EdgeFormat) -> Result<gio::LoadedGraph> {
    let loaded = gio::load_edge_list(path, format)?;
    for w in &loaded.warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(loaded)
}

/// Computes the metric suite of an edge-list file.
pub fn cmd_metrics(input: &Path, format: EdgeFormat, settings: &MetricSettings, out_dir: &Path, bins: usize) -> Result<MetricsReport> {
    ensure_dir(out_dir)?;
    let started = Instant::now();
    let loaded = load(input, format)?;
    let report = MetricsReport::compute(&loaded.graph, settings);
    write_report_artifacts(out_dir, &loaded.graph, &report, bins)?;
    emit(out_dir, "labels.csv", |w| gio::edge_list::write_label_table(&loaded.labels, w))?;
    write_manifest(
        out_dir,
        json!({
            "command": "metrics",
            "version": VERSION,
            "input": input,
            "format": format,
            "settings": settings,
            "duplicates": loaded.duplicates,
            "self_loops": loaded.self_loops,
            "wall_seconds": started.elapsed().as_secs_f64(),
        }),
    )?;
    Ok(report)
}

/// Compares `right` against the reference `left`.
pub fn cmd_compare(
    left: &Path,
    right: &Path,
    format: EdgeFormat,
    settings: &MetricSettings,
    weights: &ObjectiveWeights,
    out_dir: &Path,
) -> Result<ComparisonReport> {
    weights.validate()?;
    ensure_dir(out_dir)?;
    let started = Instant::now();
    let mut settings = settings.clone();
    settings.centralities = false;
    let l = MetricsReport::compute(&load(left, format)?.graph, &settings);
    let r = MetricsReport::compute(&load(right, format)?.graph, &settings);
    let cmp = gio::compare(&l, &r, weights)?;
    for w in &cmp.warnings {
        log::warn!("{w}");
    }
    emit(out_dir, "comparison.txt", |w| w.write_all(gio::comparison_text(&cmp).as_bytes()))?;
    emit(out_dir, "comparison.csv", |w| write_comparison_csv(&cmp, w))?;
    write_manifest(
        out_dir,
        json!({
            "command": "compare",
            "version": VERSION,
            "left": left,
            "right": right,
            "format": format,
            "settings": settings,
            "weights": weights,
            "wall_seconds": started.elapsed().as_secs_f64(),
        }),
    )?;
    Ok(cmp)
}

/// Generates a baseline graph with its edge list and metric artifacts.
pub fn cmd_baseline(spec: &BaselineSpec, settings: &MetricSettings, out_dir: &Path, bins: usize) -> Result<MetricsReport> {
    ensure_dir(out_dir)?;
    let started = Instant::now();
    let graph = spec.generate()?;
    gio::write_edge_list(&graph, out_dir.join("edges.txt"))?;
    let report = MetricsReport::compute(&graph, settings);
    write_report_artifacts(out_dir, &graph, &report, bins)?;
    write_manifest(
        out_dir,
        json!({
            "command": "baseline",
            "version": VERSION,
            "baseline": spec,
            "settings": settings,
            "wall_seconds": started.elapsed().as_secs_f64(),
        }),
    )?;
    Ok(report)
}

/// One evaluated sweep point.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    /// Position in the full grid.
    pub index: usize,
    pub params: SimParams,
    pub outcome: std::result::Result<SweepScore, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepScore {
    pub objective: f64,
    /// Compared metrics in [`Metric::ALL`] order.
    pub values: Vec<f64>,
}

impl SweepRow {
    pub fn objective(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|s| s.objective)
    }
}

/// Grid positions to evaluate, ascending.
pub fn sweep_indices(total: usize, max_evaluations: Option<usize>, subsample_seed: u64) -> Vec<usize> {
    match max_evaluations {
        Some(k) if k < total => {
            let mut r = rng::seeded(subsample_seed);
            let mut picked = rand::seq::index::sample(&mut r, total, k).into_vec();
            picked.sort_unstable();
            picked
        }
        _ => (0..total).collect(),
    }
}

fn evaluate(params: &SimParams, target: &MetricsReport, settings: &MetricSettings, weights: &ObjectiveWeights) -> Result<SweepScore> {
    let out = dynamics::run(params)?;
    // score the graph the way an exported edge list would be read back in
    let graph = out.graph.without_isolated();
    let report = MetricsReport::compute(&graph, settings);
    let cmp = gio::compare(target, &report, weights)?;
    Ok(SweepScore {
        objective: cmp.objective,
        values: Metric::ALL.iter().map(|m| m.value(&report)).collect(),
    })
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "point panicked".into())
}

/// Ranks by objective ascending (ties by grid index); failed points go last.
pub fn rank(rows: &mut [SweepRow]) {
    rows.sort_by(|a, b| match (a.objective(), b.objective()) {
        (Some(x), Some(y)) => x.total_cmp(&y).then(a.index.cmp(&b.index)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.index.cmp(&b.index),
    });
}

/// Evaluates the sweep without writing anything; rows come back ranked.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut settings = spec.base.metrics.clone();
    settings.centralities = false;
    let target = load(&spec.target, spec.format)?;
    let target = MetricsReport::compute(&target.graph, &settings);
    let grid = spec.grid.points(&spec.base.params())?;
    let picked = sweep_indices(grid.len(), spec.max_evaluations, spec.subsample_seed);
    log::info!("sweep: {} of {} grid points", picked.len(), grid.len());

    let eval = |&index: &usize| {
        let mut params = grid[index].clone();
        params.seed = match spec.seed_mode {
            SeedMode::Derived => rng::derive_seed(spec.master_seed, index as u64),
            SeedMode::Common => spec.master_seed,
        };
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| evaluate(&params, &target, &settings, &spec.weights)))
            .map_err(panic_message)
            .and_then(|r| r.map_err(|e| e.to_string()));
        match &outcome {
            Ok(s) => log::debug!("point {index}: objective {}", s.objective),
            Err(e) => log::warn!("point {index} failed: {e}"),
        }
        SweepRow { index, params, outcome }
    };
    let mut rows: Vec<SweepRow> = if spec.parallelism > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.parallelism)
            .build()
            .map_err(|e| Error::Runtime(e.to_string()))?;
        pool.install(|| picked.par_iter().map(eval).collect())
    } else {
        picked.par_iter().map(eval).collect()
    };
    rank(&mut rows);
    Ok(rows)
}

pub const SWEEP_HEADER: &str = "rank,index,seed,nu,psi,kappa,p_random,p_triadic,p_cumulative,p_distance,top_k,\
budget_split,objective,nodes,edges,avg_degree,diameter,modularity,avg_path_length,status";

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for (rank, r) in rows.iter().enumerate() {
        let p = &r.params;
        let split = p.budget_split.map(|x| x.to_string()).join(";");
        write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},",
            rank + 1,
            r.index,
            p.seed,
            p.nu,
            p.psi,
            p.kappa,
            p.p_random,
            p.p_triadic,
            p.p_cumulative,
            p.p_distance,
            p.top_k,
            split
        )?;
        match &r.outcome {
            Ok(s) => {
                let vals: Vec<String> = s.values.iter().map(|v| v.to_string()).collect();
                writeln!(out, "{},{},ok", s.objective, vals.join(","))?;
            }
            Err(e) => {
                let blanks = ",".repeat(Metric::ALL.len());
                writeln!(out, "{blanks},\"failed: {}\"", e.replace('"', "'"))?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    pub best_config: Option<PathBuf>,
    pub wall_seconds: f64,
}

/// Runs the sweep and writes `sweep_results.csv`, `best_config.toml` (when
/// any point succeeded) and the manifest.
pub fn cmd_sweep(spec: &SweepSpec, out_dir: &Path) -> Result<SweepSummary> {
    spec.validate()?;
    ensure_dir(out_dir)?;
    let started = Instant::now();
    let rows = run_sweep(spec)?;
    emit(out_dir, "sweep_results.csv", |w| write_sweep_csv(&rows, w))?;
    let best_config = match rows.first() {
        Some(best) if best.outcome.is_ok() => {
            let mut cfg = RunConfig::from_params(&best.params);
            cfg.metrics = spec.base.metrics.clone();
            cfg.output = spec.base.output.clone();
            let name = "best_config.toml";
            emit(out_dir, name, |w| w.write_all(cfg.to_toml().as_bytes()))?;
            Some(out_dir.join(name))
        }
        _ => None,
    };
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    let wall_seconds = started.elapsed().as_secs_f64();
    write_manifest(
        out_dir,
        json!({
            "command": "sweep",
            "version": VERSION,
            "spec": spec,
            "evaluated": rows.len(),
            "failed": failed,
            "wall_seconds": wall_seconds,
        }),
    )?;
    Ok(SweepSummary {
        rows,
        best_config,
        wall_seconds,
    })
}
