//! Louvain community detection on the undirected projection.
//!
//! Local moving visits nodes in a seeded shuffled order and moves each node to
//! the neighboring community with the largest modularity gain; communities are
//! then collapsed into weighted super-nodes and the process repeats until no
//! move improves the partition.

use rand::seq::SliceRandom;
use rustc_hash::FxHashMap;

use super::undirected::Undirected;
use crate::error::{Error, Result};
use crate::rng;

const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Community id per node, numbered densely from 0 in node order.
    pub membership: Vec<u32>,
    pub communities: usize,
    pub modularity: f64,
}

/// Newman modularity of `membership` on the projection:
/// `sum_c [ L_c / m - (d_c / 2m)^2 ]`.
pub fn modularity_of(graph: &Undirected, membership: &[u32]) -> Result<f64> {
    let m = graph.edge_count() as f64;
    if m == 0.0 {
        return Err(Error::ModularityUndefined);
    }
    let k = membership.iter().copied().max().map_or(0, |c| c as usize + 1);
    let mut internal = vec![0.0f64; k];
    let mut degree = vec![0.0f64; k];
    for v in 0..graph.node_count() {
        let c = membership[v] as usize;
        degree[c] += graph.degree(v) as f64;
        for &w in graph.neighbors(v) {
            if (w as usize) > v && membership[w as usize] as usize == c {
                internal[c] += 1.0;
            }
        }
    }
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(l, d)| l / m - (d / (2.0 * m)).powi(2))
        .sum())
}

/// Weighted graph used between aggregation levels. `adj[i]` holds
/// `(j, A_ij)` with self-loops stored as `(i, A_ii)`.
struct Level {
    adj: Vec<Vec<(u32, f64)>>,
    degree: Vec<f64>,
}

impl Level {
    fn from_projection(graph: &Undirected) -> Self {
        let adj: Vec<Vec<(u32, f64)>> = (0..graph.node_count())
            .map(|v| graph.neighbors(v).iter().map(|&w| (w, 1.0)).collect())
            .collect();
        let degree = adj.iter().map(|a| a.iter().map(|e| e.1).sum()).collect();
        Self { adj, degree }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// One round of local moving. Returns the dense membership and whether any
    /// node changed community.
    fn local_moving(&self, two_m: f64, rng: &mut rng::SimRng) -> (Vec<u32>, bool) {
        let n = self.len();
        let mut comm: Vec<u32> = (0..n as u32).collect();
        let mut total: Vec<f64> = self.degree.clone();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.shuffle(rng);

        let mut link: FxHashMap<u32, f64> = FxHashMap::default();
        let mut touched: Vec<u32> = Vec::new();
        let mut moved_any = false;
        loop {
            let mut moved = false;
            for &v in &order {
                let v = v as usize;
                let own = comm[v];
                let kv = self.degree[v];
                link.clear();
                touched.clear();
                for &(w, a) in &self.adj[v] {
                    if w as usize == v {
                        continue;
                    }
                    let c = comm[w as usize];
                    let e = link.entry(c).or_insert_with(|| {
                        touched.push(c);
                        0.0
                    });
                    *e += a;
                }
                total[own as usize] -= kv;
                let own_link = link.get(&own).copied().unwrap_or(0.0);
                let mut best = own;
                let mut best_gain = own_link - total[own as usize] * kv / two_m;
                for &c in &touched {
                    let gain = link[&c] - total[c as usize] * kv / two_m;
                    if gain > best_gain + MIN_GAIN {
                        best = c;
                        best_gain = gain;
                    }
                }
                total[best as usize] += kv;
                if best != own {
                    comm[v] = best;
                    moved = true;
                    moved_any = true;
                }
            }
            if !moved {
                break;
            }
        }
        (densify(&comm), moved_any)
    }

    fn aggregate(&self, membership: &[u32], communities: usize) -> Level {
        let mut rows: Vec<FxHashMap<u32, f64>> = vec![FxHashMap::default(); communities];
        for (v, edges) in self.adj.iter().enumerate() {
            let cv = membership[v];
            for &(w, a) in edges {
                *rows[cv as usize].entry(membership[w as usize]).or_insert(0.0) += a;
            }
        }
        let adj: Vec<Vec<(u32, f64)>> = rows
            .into_iter()
            .map(|r| {
                let mut row: Vec<(u32, f64)> = r.into_iter().collect();
                row.sort_unstable_by_key(|e| e.0);
                row
            })
            .collect();
        let degree = adj.iter().map(|a| a.iter().map(|e| e.1).sum()).collect();
        Level { adj, degree }
    }
}

/// Renumbers labels densely in order of first appearance.
fn densify(labels: &[u32]) -> Vec<u32> {
    let mut map: FxHashMap<u32, u32> = FxHashMap::default();
    labels
        .iter()
        .map(|&l| {
            let next = map.len() as u32;
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Louvain partition and its modularity. Deterministic for a fixed seed.
pub fn louvain(graph: &Undirected, seed: u64) -> Result<Partition> {
    let m = graph.edge_count() as f64;
    if m == 0.0 {
        return Err(Error::ModularityUndefined);
    }
    let two_m = 2.0 * m;
    let mut rng = rng::seeded(rng::derive_seed(seed, 3));
    let mut membership: Vec<u32> = (0..graph.node_count() as u32).collect();
    let mut level = Level::from_projection(graph);
    loop {
        let (local, moved) = level.local_moving(two_m, &mut rng);
        if !moved {
            break;
        }
        let communities = local.iter().copied().max().map_or(0, |c| c as usize + 1);
        for c in membership.iter_mut() {
            *c = local[*c as usize];
        }
        if communities == level.len() {
            break;
        }
        level = level.aggregate(&local, communities);
    }
    let mut membership = densify(&membership);
    let mut modularity = modularity_of(graph, &membership)?;
    if modularity < 0.0 {
        // the single-community partition scores exactly 0
        membership.iter_mut().for_each(|c| *c = 0);
        modularity = 0.0;
    }
    let communities = membership.iter().copied().max().map_or(0, |c| c as usize + 1);
    Ok(Partition {
        membership,
        communities,
        modularity,
    })
}
