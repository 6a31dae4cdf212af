//! Shared fixtures and brute-force reference implementations.
#![allow(dead_code)]

use backcloth::rng::{self, SimRng};
use backcloth::{DirectedGraph, NodeId};
use nalgebra::{DMatrix, SymmetricEigen};

pub const INF: u32 = u32::MAX;

/// Connected directed graph: a random recursive tree with random edge
/// directions plus `extra` random edges.
pub fn random_connected(n: usize, extra: usize, r: &mut SimRng) -> DirectedGraph {
    let mut g = DirectedGraph::with_nodes(n);
    for v in 1..n {
        let u = rng::index(r, v);
        let (a, b) = if rng::bernoulli(r, 0.5) { (u, v) } else { (v, u) };
        g.add_edge(NodeId::from(a), NodeId::from(b)).unwrap();
    }
    for _ in 0..extra {
        let a = rng::index(r, n);
        let b = rng::index(r, n);
        if a != b {
            g.add_edge(NodeId::from(a), NodeId::from(b)).unwrap();
        }
    }
    g
}

/// Two connected pieces on disjoint ids, sizes `big > small`.
pub fn random_two_pieces(big: usize, small: usize, r: &mut SimRng) -> DirectedGraph {
    let a = random_connected(big, big / 2, r);
    let b = random_connected(small, small / 2, r);
    let mut g = DirectedGraph::with_nodes(big + small);
    for (s, d) in a.edges() {
        g.add_edge(s, d).unwrap();
    }
    for (s, d) in b.edges() {
        g.add_edge(NodeId(s.0 + big as u32), NodeId(d.0 + big as u32)).unwrap();
    }
    g
}

/// Symmetric 0/1 adjacency of the undirected projection.
pub fn adjacency(g: &DirectedGraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (s, d) in g.edges() {
        a[s.index()][d.index()] = true;
        a[d.index()][s.index()] = true;
    }
    a
}

/// Floyd-Warshall hop distances.
pub fn floyd_warshall(a: &[Vec<bool>]) -> Vec<Vec<u32>> {
    let n = a.len();
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == INF {
                continue;
            }
            for j in 0..n {
                if d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Shortest-path counts from each source, built layer by layer from the
/// distance matrix.
pub fn path_counts(a: &[Vec<bool>], d: &[Vec<u32>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut sigma = vec![vec![0.0; n]; n];
    for s in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&v| d[s][v] != INF).collect();
        order.sort_by_key(|&v| d[s][v]);
        sigma[s][s] = 1.0;
        for &v in &order[1..] {
            sigma[s][v] = (0..n)
                .filter(|&u| a[u][v] && d[s][u] != INF && d[s][u] + 1 == d[s][v])
                .map(|u| sigma[s][u])
                .sum();
        }
    }
    sigma
}

/// Sum over unordered pairs `{s, t}` of the fraction of shortest s-t paths
/// through each node.
pub fn brute_betweenness(a: &[Vec<bool>], d: &[Vec<u32>]) -> Vec<f64> {
    let n = a.len();
    let sigma = path_counts(a, d);
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            if d[s][t] == INF {
                continue;
            }
            for v in 0..n {
                if v == s || v == t || d[s][v] == INF || d[v][t] == INF {
                    continue;
                }
                if d[s][v] + d[v][t] == d[s][t] {
                    b[v] += sigma[s][v] * sigma[t][v] / sigma[s][t];
                }
            }
        }
    }
    b
}

/// `(reachable - 1) / sum of distances`, 0 for isolated nodes.
pub fn brute_closeness(d: &[Vec<u32>]) -> Vec<f64> {
    d.iter()
        .map(|row| {
            let reach: Vec<u64> = row.iter().filter(|&&x| x != INF && x > 0).map(|&x| x as u64).collect();
            let sum: u64 = reach.iter().sum();
            if sum == 0 {
                0.0
            } else {
                reach.len() as f64 / sum as f64
            }
        })
        .collect()
}

/// Diameter and mean distance over ordered pairs of the largest component.
pub fn brute_paths(d: &[Vec<u32>]) -> (u32, f64) {
    let n = d.len();
    let comp_size = |i: usize| d[i].iter().filter(|&&x| x != INF).count();
    let root = (0..n).max_by_key(|&i| (comp_size(i), std::cmp::Reverse(i))).unwrap();
    let members: Vec<usize> = (0..n).filter(|&j| d[root][j] != INF).collect();
    let (mut diam, mut sum) = (0u32, 0u64);
    for &i in &members {
        for &j in &members {
            diam = diam.max(d[i][j]);
            sum += d[i][j] as u64;
        }
    }
    let k = members.len() as f64;
    let apl = if members.len() < 2 { 0.0 } else { sum as f64 / (k * (k - 1.0)) };
    (diam, apl)
}

/// Dominant eigenvector of the adjacency matrix, unit L2 norm, non-negative.
pub fn dense_eigenvector(a: &[Vec<bool>]) -> Vec<f64> {
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |i, j| if a[i][j] { 1.0 } else { 0.0 });
    let eig = SymmetricEigen::new(m);
    let top = eig.eigenvalues.iter().enumerate().max_by(|x: &(usize, &f64), y| x.1.total_cmp(y.1)).unwrap().0;
    let v = eig.eigenvectors.column(top);
    let sign = if v.sum() < 0.0 { -1.0 } else { 1.0 };
    let norm = v.norm();
    v.iter().map(|x| sign * x / norm).collect()
}

/// `|x - y| <= tol * max(|y|, 1)` elementwise.
pub fn close_slices(x: &[f64], y: &[f64], tol: f64) -> Option<(usize, f64, f64)> {
    x.iter()
        .zip(y)
        .enumerate()
        .find(|(_, (a, b))| (*a - *b).abs() > tol * b.abs().max(1.0))
        .map(|(i, (a, b))| (i, *a, *b))
}

/// Like [`close_slices`] but scaled by the largest reference entry, for
/// vectors whose small entries carry no relative precision.
pub fn close_scaled(x: &[f64], y: &[f64], tol: f64) -> Option<(usize, f64, f64)> {
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    x.iter()
        .zip(y)
        .enumerate()
        .find(|(_, (a, b))| (*a - *b).abs() > tol * scale)
        .map(|(i, (a, b))| (i, *a, *b))
}

/// Current peak resident set size in bytes (Linux), if available.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

/// Every file in `dir` except `skip`, sorted by name, with contents.
pub fn dir_contents(dir: &std::path::Path, skip: &[&str]) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), p))
        .filter(|(name, _)| !skip.contains(&name.as_str()))
        .map(|(name, p)| (name, std::fs::read(p).unwrap()))
        .collect();
    out.sort();
    out
}
