//! Directed degree census, binomial goodness of fit and CCDF tail slope.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

use crate::graph::DirectedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    In,
    Out,
    Total,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
            Direction::Total => "total",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    pub direction: Direction,
    /// degree -> number of nodes with that degree.
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeHistogram {
    pub fn from_degrees(direction: Direction, degrees: &[usize]) -> Self {
        let mut counts = BTreeMap::new();
        for &d in degrees {
            *counts.entry(d).or_insert(0) += 1;
        }
        Self { direction, counts }
    }

    pub fn nodes(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn degree_sum(&self) -> usize {
        self.counts.iter().map(|(d, c)| d * c).sum()
    }

    pub fn mean(&self) -> f64 {
        let n = self.nodes();
        if n == 0 {
            0.0
        } else {
            self.degree_sum() as f64 / n as f64
        }
    }

    pub fn max(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }
}

pub fn degrees(graph: &DirectedGraph, direction: Direction) -> Vec<usize> {
    match direction {
        Direction::In => graph.in_degrees(),
        Direction::Out => graph.out_degrees(),
        Direction::Total => graph
            .nodes()
            .map(|v| graph.in_degree(v) + graph.out_degree(v))
            .collect(),
    }
}

pub fn degree_histogram(graph: &DirectedGraph, direction: Direction) -> DegreeHistogram {
    DegreeHistogram::from_degrees(direction, &degrees(graph, direction))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square test of a degree histogram against
/// `Binomial(trials, p)`. Adjacent degree classes are pooled until each bin
/// expects at least 5 nodes; the last bin absorbs the upper tail.
/// `estimated` parameters are subtracted from the degrees of freedom.
pub fn binomial_gof(hist: &DegreeHistogram, trials: u64, p: f64, estimated: usize) -> Option<GoodnessOfFit> {
    let n = hist.nodes() as f64;
    let dist = Binomial::new(p, trials).ok()?;
    let max_k = hist.max().max((trials as f64 * p).ceil() as usize + 1);
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    let mut cumulative = 0.0;
    for k in 0..=max_k {
        let pk = dist.pmf(k as u64);
        cumulative += pk;
        obs += hist.counts.get(&k).copied().unwrap_or(0) as f64;
        exp += n * pk;
        if exp >= 5.0 {
            bins.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    // upper tail beyond max_k has no observations
    exp += n * (1.0 - cumulative).max(0.0);
    match bins.last_mut() {
        Some(last) if exp < 5.0 => {
            last.0 += obs;
            last.1 += exp;
        }
        _ => bins.push((obs, exp)),
    }
    if bins.len() < 2 + estimated {
        return None;
    }
    let statistic: f64 = bins.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = bins.len() - 1 - estimated;
    let p_value = 1.0 - ChiSquared::new(dof as f64).ok()?.cdf(statistic);
    Some(GoodnessOfFit { statistic, dof, p_value })
}

/// Least-squares slope of `log10 P(D >= k)` against `log10 k`, sampled at
/// log-spaced `k` from `k_min` up to the largest `k` that still has at least
/// `min_tail` nodes at or above it.
pub fn ccdf_loglog_slope(degrees: &[usize], k_min: usize, min_tail: usize) -> Option<f64> {
    let n = degrees.len();
    if n == 0 || k_min == 0 {
        return None;
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    let tail = |k: usize| n - sorted.partition_point(|&d| d < k);
    let mut points = Vec::new();
    let mut x = k_min as f64;
    let mut last = 0usize;
    loop {
        let k = x.round() as usize;
        if k != last {
            let t = tail(k);
            if t < min_tail {
                break;
            }
            points.push(((k as f64).log10(), (t as f64 / n as f64).log10()));
            last = k;
        }
        x *= 10f64.powf(0.05);
    }
    least_squares(&points).map(|(slope, _, _)| slope)
}

/// `(slope, intercept, rms residual)`.
pub fn least_squares(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Some((slope, intercept, rms))
}

/// Sample skewness; 0 for fewer than 3 values or zero variance.
pub fn skewness(values: &[usize]) -> f64 {
    let n = values.len() as f64;
    if values.len() < 3 {
        return 0.0;
    }
    let mean = values.iter().sum::<usize>() as f64 / n;
    let m2 = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
    let m3 = values.iter().map(|&v| (v as f64 - mean).powi(3)).sum::<f64>() / n;
    if m2 == 0.0 {
        0.0
    } else {
        m3 / m2.powf(1.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeId;

    #[test]
    fn small_census() {
        let mut g = DirectedGraph::with_nodes(3);
        g.add_edge(NodeId(0), NodeId(1)).unwrap();
        g.add_edge(NodeId(0), NodeId(2)).unwrap();
        let out = degree_histogram(&g, Direction::Out);
        assert_eq!(out.counts, BTreeMap::from([(0, 2), (2, 1)]));
        let inn = degree_histogram(&g, Direction::In);
        assert_eq!(inn.counts, BTreeMap::from([(0, 1), (1, 2)]));
        assert_eq!(inn.degree_sum(), g.edge_count());
        assert!(degree_histogram(&DirectedGraph::new(), Direction::In).counts.is_empty());
    }

    #[test]
    fn exact_binomial_counts_fit() {
        // histogram built from expected counts should have a tiny statistic
        let dist = Binomial::new(0.01, 99).unwrap();
        let mut counts = BTreeMap::new();
        for k in 0..10 {
            counts.insert(k, (10_000.0 * dist.pmf(k as u64)).round() as usize);
        }
        let hist = DegreeHistogram { direction: Direction::In, counts };
        let n = hist.nodes() as u64;
        assert!(n > 9_990);
        let gof = binomial_gof(&hist, 99, 0.01, 1).unwrap();
        assert!(gof.p_value > 0.5, "{gof:?}");
    }

    #[test]
    fn geometric_counts_reject() {
        let counts = (0..12).map(|k| (k, (5000.0 * 0.5f64.powi(k as i32 + 1)) as usize)).collect();
        let hist = DegreeHistogram { direction: Direction::In, counts };
        let m = hist.mean();
        let n = hist.nodes() as u64;
        let gof = binomial_gof(&hist, n - 1, m / (n - 1) as f64, 1).unwrap();
        assert!(gof.p_value < 1e-6);
    }

    #[test]
    fn ccdf_slope_of_exact_pareto() {
        // P(D >= k) = k^-2 realized by quantiles
        let n = 200_000usize;
        let degrees: Vec<usize> = (0..n)
            .map(|i| {
                let u = 1.0 - (i as f64 + 0.5) / n as f64;
                u.powf(-0.5).floor() as usize
            })
            .collect();
        let slope = ccdf_loglog_slope(&degrees, 2, 50).unwrap();
        assert!((slope + 2.0).abs() < 0.1, "{slope}");
    }

    #[test]
    fn skewness_signs() {
        assert_eq!(skewness(&[1, 1, 1, 1]), 0.0);
        assert!(skewness(&[0, 0, 0, 0, 0, 10]) > 1.0);
    }
}
