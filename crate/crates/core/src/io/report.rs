//! Text and CSV renderings of metric and comparison reports.
//!
//! Floats are printed with 6 significant digits in the style of C's `%g`.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{DegreeHistogram, MetricsReport};

/// `%.6g`.
pub fn fmt_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".into(), fmt_g6)
}

/// Flat `key = value` lines.
pub fn report_text(r: &MetricsReport) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("nodes", r.nodes.to_string());
    kv("edges", r.edges.to_string());
    kv("avg_degree", fmt_g6(r.avg_degree));
    kv("avg_total_degree", fmt_g6(r.avg_total_degree));
    kv("max_in_degree", r.max_in_degree.to_string());
    kv("max_out_degree", r.max_out_degree.to_string());
    kv("diameter", r.diameter.to_string());
    kv("avg_path_length", fmt_g6(r.avg_path_length));
    kv("lwcc_size", r.lwcc_size.to_string());
    kv("modularity", opt(r.modularity));
    kv("communities", r.communities.to_string());
    kv("paths_sampled", r.flags.paths_sampled.to_string());
    kv("betweenness_sampled", r.flags.betweenness_sampled.to_string());
    kv("closeness_sampled", r.flags.closeness_sampled.to_string());
    kv("eigenvector_converged", r.flags.eigenvector_converged.to_string());
    kv("eigenvector_edgeless", r.flags.eigenvector_edgeless.to_string());
    kv("settings.exact_threshold", r.settings.exact_threshold.to_string());
    kv("settings.sample_sources", r.settings.sample_sources.to_string());
    kv("settings.eigen_tol", fmt_g6(r.settings.eigen_tol));
    kv("settings.eigen_max_iter", r.settings.eigen_max_iter.to_string());
    kv("settings.seed", r.settings.seed.to_string());
    s
}

/// `metric,value` rows for the scalar part of the report.
pub fn write_metrics_csv<W: Write>(r: &MetricsReport, mut out: W) -> io::Result<()> {
    writeln!(out, "metric,value")?;
    for line in report_text(r).lines() {
        if let Some((k, v)) = line.split_once(" = ") {
            if !k.starts_with("settings.") {
                writeln!(out, "{k},{v}")?;
            }
        }
    }
    Ok(())
}

/// `node,eigenvector,betweenness,closeness` rows.
pub fn write_centralities_csv<W: Write>(r: &MetricsReport, mut out: W) -> io::Result<()> {
    writeln!(out, "node,eigenvector,betweenness,closeness")?;
    if let Some(c) = &r.centralities {
        for i in 0..c.eigenvector.len() {
            writeln!(
                out,
                "{i},{},{},{}",
                fmt_g6(c.eigenvector[i]),
                fmt_g6(c.betweenness[i]),
                fmt_g6(c.closeness[i])
            )?;
        }
    }
    Ok(())
}

/// Two-column `value,count` CSV.
pub fn write_histogram_csv<W: Write>(h: &DegreeHistogram, mut out: W) -> io::Result<()> {
    writeln!(out, "value,count")?;
    for (d, c) in &h.counts {
        writeln!(out, "{d},{c}")?;
    }
    Ok(())
}

/// Rows compared by the calibration objective, in display order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Nodes,
    Edges,
    AvgDegree,
    Diameter,
    Modularity,
    AvgPathLength,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Nodes,
        Metric::Edges,
        Metric::AvgDegree,
        Metric::Diameter,
        Metric::Modularity,
        Metric::AvgPathLength,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Nodes => "nodes",
            Metric::Edges => "edges",
            Metric::AvgDegree => "avg_degree",
            Metric::Diameter => "diameter",
            Metric::Modularity => "modularity",
            Metric::AvgPathLength => "avg_path_length",
        }
    }

    /// Undefined modularity counts as 0.
    pub fn value(self, r: &MetricsReport) -> f64 {
        match self {
            Metric::Nodes => r.nodes as f64,
            Metric::Edges => r.edges as f64,
            Metric::AvgDegree => r.avg_degree,
            Metric::Diameter => r.diameter as f64,
            Metric::Modularity => r.modularity.unwrap_or(0.0),
            Metric::AvgPathLength => r.avg_path_length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObjectiveWeights {
    pub nodes: f64,
    pub edges: f64,
    pub avg_degree: f64,
    pub diameter: f64,
    pub modularity: f64,
    pub avg_path_length: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        Self {
            nodes: 1.0,
            edges: 1.0,
            avg_degree: 1.0,
            diameter: 1.0,
            modularity: 1.0,
            avg_path_length: 1.0,
        }
    }
}

impl ObjectiveWeights {
    pub fn weight(&self, m: Metric) -> f64 {
        match m {
            Metric::Nodes => self.nodes,
            Metric::Edges => self.edges,
            Metric::AvgDegree => self.avg_degree,
            Metric::Diameter => self.diameter,
            Metric::Modularity => self.modularity,
            Metric::AvgPathLength => self.avg_path_length,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if Metric::ALL.iter().any(|&m| !(self.weight(m) >= 0.0 && self.weight(m).is_finite())) {
            return Err(Error::Config("objective weights must be finite and non-negative".into()));
        }
        Ok(())
    }
}

/// Guards zero-valued reference metrics in the normalization.
pub const OBJECTIVE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricDelta {
    pub metric: Metric,
    pub left: f64,
    pub right: f64,
    pub absolute: f64,
    /// `|left - right| / max(|left|, eps)`.
    pub relative: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub left: MetricsReport,
    pub right: MetricsReport,
    pub deltas: Vec<MetricDelta>,
    pub objective: f64,
    pub warnings: Vec<String>,
}

/// Weighted normalized L1 distance of `right` from the reference `left`.
pub fn compare(left: &MetricsReport, right: &MetricsReport, weights: &ObjectiveWeights) -> Result<ComparisonReport> {
    if left.settings.scalar_fingerprint() != right.settings.scalar_fingerprint() {
        return Err(Error::MismatchedSettings);
    }
    let deltas: Vec<MetricDelta> = Metric::ALL
        .iter()
        .map(|&metric| {
            let (l, r) = (metric.value(left), metric.value(right));
            let absolute = (l - r).abs();
            let relative = absolute / l.abs().max(OBJECTIVE_EPS);
            MetricDelta {
                metric,
                left: l,
                right: r,
                absolute,
                relative,
                contribution: weights.weight(metric) * relative,
            }
        })
        .collect();
    let objective = deltas.iter().map(|d| d.contribution).sum();
    let mut warnings = Vec::new();
    for (side, r) in [("left", left), ("right", right)] {
        if r.avg_path_length > r.diameter as f64 {
            warnings.push(format!(
                "{side}: avg_path_length ({}) exceeds diameter ({}); not possible under shortest-path definitions",
                fmt_g6(r.avg_path_length),
                r.diameter
            ));
        }
    }
    Ok(ComparisonReport {
        left: left.clone(),
        right: right.clone(),
        deltas,
        objective,
        warnings,
    })
}

/// Side-by-side table in fixed row order.
pub fn comparison_text(c: &ComparisonReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<18} {:>14} {:>14} {:>14} {:>14}", "metric", "left", "right", "abs_delta", "rel_delta");
    for d in &c.deltas {
        let shown = |x: f64| match d.metric {
            Metric::Modularity if x == 0.0 && c.left.modularity.is_none() => "undefined".to_string(),
            _ => fmt_g6(x),
        };
        let _ = writeln!(
            s,
            "{:<18} {:>14} {:>14} {:>14} {:>14}",
            d.metric.name(),
            shown(d.left),
            fmt_g6(d.right),
            fmt_g6(d.absolute),
            fmt_g6(d.relative)
        );
    }
    let _ = writeln!(s, "objective = {}", fmt_g6(c.objective));
    for w in &c.warnings {
        let _ = writeln!(s, "warning = {w}");
    }
    s
}

pub fn write_comparison_csv<W: Write>(c: &ComparisonReport, mut out: W) -> io::Result<()> {
    writeln!(out, "metric,left,right,abs_delta,rel_delta,contribution")?;
    for d in &c.deltas {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            d.metric.name(),
            fmt_g6(d.left),
            fmt_g6(d.right),
            fmt_g6(d.absolute),
            fmt_g6(d.relative),
            fmt_g6(d.contribution)
        )?;
    }
    writeln!(out, "objective,,,,,{}", fmt_g6(c.objective))
}
