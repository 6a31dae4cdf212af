//! Betweenness (Brandes) and eigenvector centrality on the undirected
//! projection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::paths::{chunked_reduce, sample_sources};
use super::undirected::Undirected;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetweennessMode {
    Exact,
    /// `k` uniform pivots, scores scaled by `n / k`.
    Sampled(usize),
}

struct Brandes {
    dist: Vec<u32>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<u32>,
    scores: Vec<f64>,
}

impl Brandes {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![u32::MAX; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::new(),
            scores: vec![0.0; n],
        }
    }

    fn accumulate(&mut self, graph: &Undirected, s: u32) {
        let s = s as usize;
        self.order.clear();
        self.dist[s] = 0;
        self.sigma[s] = 1.0;
        self.order.push(s as u32);
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head] as usize;
            head += 1;
            let next = self.dist[v] + 1;
            for &w in graph.neighbors(v) {
                let w = w as usize;
                if self.dist[w] == u32::MAX {
                    self.dist[w] = next;
                    self.order.push(w as u32);
                }
                if self.dist[w] == next {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
        // successors of v are the neighbors one hop further from s
        for &v in self.order.iter().rev() {
            let v = v as usize;
            let next = self.dist[v] + 1;
            let mut d = 0.0;
            for &w in graph.neighbors(v) {
                let w = w as usize;
                if self.dist[w] == next {
                    d += self.sigma[v] / self.sigma[w] * (1.0 + self.delta[w]);
                }
            }
            self.delta[v] = d;
            if v != s {
                self.scores[v] += d;
            }
        }
        for &v in &self.order {
            let v = v as usize;
            self.dist[v] = u32::MAX;
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
        }
    }
}

/// Unnormalized betweenness: the number of shortest paths between unordered
/// pairs that pass through each node, split evenly across ties.
pub fn betweenness(graph: &Undirected, mode: BetweennessMode, seed: u64) -> Vec<f64> {
    let n = graph.node_count();
    let all: Vec<u32> = (0..n as u32).collect();
    let (sources, scale) = match mode {
        BetweennessMode::Exact => (all, 1.0),
        BetweennessMode::Sampled(k) => {
            let k = k.clamp(1, n.max(1));
            let picked = sample_sources(&all, k, rng::derive_seed(seed, 2));
            (picked, n as f64 / k as f64)
        }
    };
    let acc = chunked_reduce(
        &sources,
        || Brandes::new(n),
        |b, s| b.accumulate(graph, s),
        |a, b| {
            for (x, y) in a.scores.iter_mut().zip(b.scores) {
                *x += y;
            }
        },
    );
    match acc {
        None => vec![0.0; n],
        Some(b) => b.scores.into_iter().map(|x| x * scale / 2.0).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenvector {
    pub scores: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Set when the graph has no edges; scores are all zero.
    pub edgeless: bool,
}

/// Power iteration on `A + I` (same eigenvectors as `A`, but the dominant
/// eigenvalue is strictly largest in modulus, so bipartite graphs converge).
/// The result is L2-normalized.
pub fn eigenvector_centrality(graph: &Undirected, tol: f64, max_iter: usize) -> Eigenvector {
    let n = graph.node_count();
    if graph.edge_count() == 0 {
        return Eigenvector {
            scores: vec![0.0; n],
            converged: false,
            iterations: 0,
            edgeless: true,
        };
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        y.par_iter_mut().enumerate().with_min_len(1024).for_each(|(v, out)| {
            *out = x[v] + graph.neighbors(v).iter().map(|&w| x[w as usize]).sum::<f64>();
        });
        let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        let mut gap = 0.0f64;
        for (a, b) in y.iter_mut().zip(&x) {
            *a /= norm;
            gap = gap.max((*a - b).abs());
        }
        std::mem::swap(&mut x, &mut y);
        if gap < tol {
            converged = true;
            break;
        }
    }
    Eigenvector {
        scores: x,
        converged,
        iterations,
        edgeless: false,
    }
}
