//! Summary metrics and centrality distributions.
//!
//! Degree histograms are directed. Everything path-, community- or
//! centrality-based runs on the undirected projection ([`Undirected`]).

pub mod centrality;
pub mod degree;
pub mod louvain;
pub mod paths;
pub mod undirected;

use serde::{Deserialize, Serialize};

pub use centrality::{betweenness, eigenvector_centrality, BetweennessMode, Eigenvector};
pub use degree::{
    binomial_gof, ccdf_loglog_slope, degree_histogram, degrees, DegreeHistogram, Direction, GoodnessOfFit,
};
pub use louvain::{louvain, modularity_of, Partition};
pub use paths::{closeness, diameter_and_apl, PathStats};
pub use undirected::Undirected;

use crate::graph::DirectedGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricSettings {
    /// Graphs with more nodes use sampled sources for path measures and
    /// betweenness.
    pub exact_threshold: usize,
    pub sample_sources: usize,
    pub eigen_tol: f64,
    pub eigen_max_iter: usize,
    /// Seeds source sampling and the Louvain visiting order.
    pub seed: u64,
    /// Compute per-node centrality arrays (skipped by sweeps).
    pub centralities: bool,
}

impl Default for MetricSettings {
    fn default() -> Self {
        Self {
            exact_threshold: 20_000,
            sample_sources: 512,
            eigen_tol: 1e-9,
            eigen_max_iter: 1000,
            seed: 0,
            centralities: true,
        }
    }
}

impl MetricSettings {
    pub fn betweenness_mode(&self, n: usize) -> BetweennessMode {
        if n > self.exact_threshold {
            BetweennessMode::Sampled(self.sample_sources)
        } else {
            BetweennessMode::Exact
        }
    }

    /// Settings that affect the scalar rows of a report.
    pub fn scalar_fingerprint(&self) -> (usize, usize, u64) {
        (self.exact_threshold, self.sample_sources, self.seed)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportFlags {
    pub paths_sampled: bool,
    pub betweenness_sampled: bool,
    pub closeness_sampled: bool,
    pub eigenvector_converged: bool,
    pub eigenvector_edgeless: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Centralities {
    pub eigenvector: Vec<f64>,
    pub betweenness: Vec<f64>,
    pub closeness: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub nodes: usize,
    pub edges: usize,
    /// `edges / nodes`: the mean in-degree, equal to the mean out-degree.
    pub avg_degree: f64,
    /// `2 * edges / nodes`: mean in-plus-out degree.
    pub avg_total_degree: f64,
    pub max_in_degree: usize,
    pub max_out_degree: usize,
    pub diameter: u32,
    pub avg_path_length: f64,
    pub lwcc_size: usize,
    /// `None` when the graph has no edges.
    pub modularity: Option<f64>,
    pub communities: usize,
    pub flags: ReportFlags,
    pub centralities: Option<Centralities>,
    pub settings: MetricSettings,
}

impl MetricsReport {
    pub fn compute(graph: &DirectedGraph, settings: &MetricSettings) -> Self {
        let n = graph.node_count();
        let m = graph.edge_count();
        let proj = Undirected::from_graph(graph);
        let mut flags = ReportFlags::default();

        let (diameter, apl, lwcc) = match diameter_and_apl(&proj, settings) {
            Ok(s) => {
                flags.paths_sampled = s.sampled;
                (s.diameter, s.avg_path_length, s.component_size)
            }
            Err(_) => (0, 0.0, 0),
        };
        let (modularity, communities) = match louvain(&proj, settings.seed) {
            Ok(p) => (Some(p.modularity), p.communities),
            Err(_) => (None, 0),
        };

        let centralities = settings.centralities.then(|| {
            let eig = eigenvector_centrality(&proj, settings.eigen_tol, settings.eigen_max_iter);
            flags.eigenvector_converged = eig.converged;
            flags.eigenvector_edgeless = eig.edgeless;
            let mode = settings.betweenness_mode(n);
            flags.betweenness_sampled = matches!(mode, BetweennessMode::Sampled(k) if k < n);
            let bet = betweenness(&proj, mode, settings.seed);
            let (clo, clo_sampled) = closeness(&proj, settings);
            flags.closeness_sampled = clo_sampled;
            Centralities {
                eigenvector: eig.scores,
                betweenness: bet,
                closeness: clo,
            }
        });

        let ratio = |num: f64| if n == 0 { 0.0 } else { num / n as f64 };
        Self {
            nodes: n,
            edges: m,
            avg_degree: ratio(m as f64),
            avg_total_degree: ratio(2.0 * m as f64),
            max_in_degree: graph.in_degrees().into_iter().max().unwrap_or(0),
            max_out_degree: graph.out_degrees().into_iter().max().unwrap_or(0),
            diameter,
            avg_path_length: apl,
            lwcc_size: lwcc,
            modularity,
            communities,
            flags,
            centralities,
            settings: settings.clone(),
        }
    }
}
