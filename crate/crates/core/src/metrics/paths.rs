//! Shortest-path measures over the undirected projection: diameter, average
//! path length and classical closeness. Above the exact threshold the source
//! set is a seeded uniform sample and results are flagged as sampled.

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::undirected::Undirected;
use super::MetricSettings;
use crate::error::{Error, Result};
use crate::rng;

/// Fixed number of reduction chunks, so floating-point accumulation order does
/// not depend on the thread count.
pub(crate) const REDUCTION_CHUNKS: usize = 64;

/// Runs `work` for every source, in parallel over a fixed chunking, and merges
/// chunk results in chunk order.
pub(crate) fn chunked_reduce<A, I, W, M>(sources: &[u32], init: I, work: W, mut merge: M) -> Option<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    W: Fn(&mut A, u32) + Sync,
    M: FnMut(&mut A, A),
{
    if sources.is_empty() {
        return None;
    }
    let chunk = sources.len().div_ceil(REDUCTION_CHUNKS).max(1);
    let parts: Vec<A> = sources
        .par_chunks(chunk)
        .map(|c| {
            let mut acc = init();
            for &s in c {
                work(&mut acc, s);
            }
            acc
        })
        .collect();
    let mut iter = parts.into_iter();
    let mut acc = iter.next()?;
    for part in iter {
        merge(&mut acc, part);
    }
    Some(acc)
}

/// Reusable BFS buffers.
pub(crate) struct Bfs {
    pub dist: Vec<u32>,
    pub order: Vec<u32>,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Self {
            dist: vec![u32::MAX; n],
            order: Vec::new(),
        }
    }

    /// Fills `order` with reachable nodes in BFS order and `dist` with their
    /// hop counts. Call [`clear`](Self::clear) before the next source.
    pub fn run(&mut self, graph: &Undirected, source: u32) {
        self.order.clear();
        self.dist[source as usize] = 0;
        self.order.push(source);
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            let next = self.dist[v as usize] + 1;
            for &w in graph.neighbors(v as usize) {
                if self.dist[w as usize] == u32::MAX {
                    self.dist[w as usize] = next;
                    self.order.push(w);
                }
            }
        }
    }

    pub fn clear(&mut self) {
        for &v in &self.order {
            self.dist[v as usize] = u32::MAX;
        }
    }
}

/// Sorted uniform sample of `k` members (all of them when `k >= len`).
pub(crate) fn sample_sources(members: &[u32], k: usize, seed: u64) -> Vec<u32> {
    let mut out: Vec<u32> = if k >= members.len() {
        members.to_vec()
    } else {
        let mut r = rng::seeded(seed);
        index::sample(&mut r, members.len(), k)
            .into_iter()
            .map(|i| members[i])
            .collect()
    };
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathStats {
    pub diameter: u32,
    pub avg_path_length: f64,
    /// Size of the largest weakly connected component.
    pub component_size: usize,
    pub sources: usize,
    pub sampled: bool,
}

/// Diameter and mean shortest-path length over ordered reachable pairs of the
/// largest weakly connected component.
pub fn diameter_and_apl(graph: &Undirected, settings: &MetricSettings) -> Result<PathStats> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let comps = graph.components();
    let lwcc = comps.largest().expect("non-empty graph has a component");
    let members = comps.members(lwcc);
    let size = members.len();
    if size == 1 {
        return Ok(PathStats {
            diameter: 0,
            avg_path_length: 0.0,
            component_size: 1,
            sources: 1,
            sampled: false,
        });
    }
    let sampled = n > settings.exact_threshold && settings.sample_sources < size;
    let sources = if sampled {
        sample_sources(&members, settings.sample_sources, rng::derive_seed(settings.seed, 1))
    } else {
        members
    };

    struct Acc {
        bfs: Bfs,
        ecc: u32,
        sum: u64,
    }
    let acc = chunked_reduce(
        &sources,
        || Acc {
            bfs: Bfs::new(n),
            ecc: 0,
            sum: 0,
        },
        |acc, s| {
            acc.bfs.run(graph, s);
            for &v in &acc.bfs.order {
                let d = acc.bfs.dist[v as usize];
                acc.ecc = acc.ecc.max(d);
                acc.sum += d as u64;
            }
            acc.bfs.clear();
        },
        |a, b| {
            a.ecc = a.ecc.max(b.ecc);
            a.sum += b.sum;
        },
    )
    .expect("component has sources");

    let pairs = sources.len() as u64 * (size as u64 - 1);
    Ok(PathStats {
        diameter: acc.ecc,
        avg_path_length: acc.sum as f64 / pairs as f64,
        component_size: size,
        sources: sources.len(),
        sampled,
    })
}

/// Classical closeness `(reachable - 1) / sum of distances` inside each node's
/// weak component; isolated nodes score 0. On large graphs, components bigger
/// than the sample size use sampled sources and the estimate
/// `sources / sum of distances from those sources`.
pub fn closeness(graph: &Undirected, settings: &MetricSettings) -> (Vec<f64>, bool) {
    let n = graph.node_count();
    let large = n > settings.exact_threshold;
    let comps = graph.components();
    let mut sources = Vec::new();
    let mut sampled = false;
    for (id, members) in comps.all_members().into_iter().enumerate() {
        if members.len() < 2 {
            continue;
        }
        if large && members.len() > settings.sample_sources {
            sampled = true;
            let seed = rng::derive_seed(settings.seed, 1000 + id as u64);
            sources.extend(sample_sources(&members, settings.sample_sources, seed));
        } else {
            sources.extend(members);
        }
    }
    sources.sort_unstable();

    struct Acc {
        bfs: Bfs,
        dist_sum: Vec<u64>,
        count: Vec<u32>,
    }
    let acc = chunked_reduce(
        &sources,
        || Acc {
            bfs: Bfs::new(n),
            dist_sum: vec![0; n],
            count: vec![0; n],
        },
        |acc, s| {
            acc.bfs.run(graph, s);
            for &v in &acc.bfs.order[1..] {
                acc.dist_sum[v as usize] += acc.bfs.dist[v as usize] as u64;
                acc.count[v as usize] += 1;
            }
            acc.bfs.clear();
        },
        |a, b| {
            for (x, y) in a.dist_sum.iter_mut().zip(b.dist_sum) {
                *x += y;
            }
            for (x, y) in a.count.iter_mut().zip(b.count) {
                *x += y;
            }
        },
    );
    let scores = match acc {
        None => vec![0.0; n],
        Some(acc) => acc
            .dist_sum
            .iter()
            .zip(&acc.count)
            .map(|(&sum, &cnt)| if sum == 0 { 0.0 } else { cnt as f64 / sum as f64 })
            .collect(),
    };
    (scores, sampled)
}
