//! Grow-only directed simple graph.
//!
//! Nodes are dense `u32` indices handed out in creation order. The store keeps
//! out- and in-adjacency in insertion order plus a hash set of packed edge
//! keys, so degree lookups, membership tests and uniform node sampling are all
//! O(1). There is no removal API.

use std::fmt;

use rand::RngCore;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Dense node index. Ids are consecutive from 0 in creation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    #[inline]
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[inline]
fn edge_key(src: NodeId, dst: NodeId) -> u64 {
    ((src.0 as u64) << 32) | dst.0 as u64
}

#[derive(Debug, Clone, Default)]
pub struct DirectedGraph {
    out_adj: Vec<Vec<NodeId>>,
    in_adj: Vec<Vec<NodeId>>,
    birth_turn: Vec<u32>,
    edge_set: FxHashSet<u64>,
}

impl DirectedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with `n` isolated nodes born at turn 0.
    pub fn with_nodes(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_node(0);
        }
        g
    }

    /// Appends a node. `turn` must not be smaller than the birth turn of the
    /// previous node; it is clamped up to keep birth turns non-decreasing.
    pub fn add_node(&mut self, turn: u32) -> NodeId {
        let id = NodeId(self.out_adj.len() as u32);
        let turn = self.birth_turn.last().map_or(turn, |&last| turn.max(last));
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        self.birth_turn.push(turn);
        id
    }

    /// Adds `src -> dst`. Returns `Ok(false)` without mutating for self-loops
    /// and already present edges.
    pub fn add_edge(&mut self, src: NodeId, dst: NodeId) -> Result<bool> {
        self.check(src)?;
        self.check(dst)?;
        Ok(self.insert_edge(src, dst))
    }

    /// Unchecked variant of [`add_edge`](Self::add_edge) for ids known to exist.
    #[inline]
    pub(crate) fn insert_edge(&mut self, src: NodeId, dst: NodeId) -> bool {
        if src == dst || !self.edge_set.insert(edge_key(src, dst)) {
            return false;
        }
        self.out_adj[src.index()].push(dst);
        self.in_adj[dst.index()].push(src);
        true
    }

    #[inline]
    pub fn has_edge(&self, src: NodeId, dst: NodeId) -> bool {
        self.edge_set.contains(&edge_key(src, dst))
    }

    /// Either direction.
    #[inline]
    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.out_adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out_adj.is_empty()
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        v.index() < self.out_adj.len()
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownNode(v.0))
        }
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_adj[v.index()].len()
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_adj[v.index()].len()
    }

    pub fn birth_turn(&self, v: NodeId) -> u32 {
        self.birth_turn[v.index()]
    }

    /// Out-neighbors in insertion order; errors on unknown ids.
    pub fn neighbors_out(&self, v: NodeId) -> Result<&[NodeId]> {
        self.check(v)?;
        Ok(&self.out_adj[v.index()])
    }

    /// In-neighbors in insertion order; errors on unknown ids.
    pub fn neighbors_in(&self, v: NodeId) -> Result<&[NodeId]> {
        self.check(v)?;
        Ok(&self.in_adj[v.index()])
    }

    /// Panicking accessors for hot loops over known-valid ids.
    #[inline]
    pub fn out_slice(&self, v: NodeId) -> &[NodeId] {
        &self.out_adj[v.index()]
    }

    #[inline]
    pub fn in_slice(&self, v: NodeId) -> &[NodeId] {
        &self.in_adj[v.index()]
    }

    /// Uniform node from exactly one draw of `rng`.
    pub fn random_node<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<NodeId> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(NodeId::from(rng::index(rng, self.node_count())))
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count()).map(NodeId::from)
    }

    /// Edges grouped by source, each source's targets in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(s, outs)| outs.iter().map(move |&d| (NodeId::from(s), d)))
    }

    /// Edges sorted by `(src, dst)`.
    pub fn sorted_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut edges: Vec<_> = self.edges().collect();
        edges.sort_unstable();
        edges
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        self.in_adj.iter().map(Vec::len).collect()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out_adj.iter().map(Vec::len).collect()
    }

    /// Order-preserving compaction that drops nodes without any edge. This is
    /// the graph an edge-list export followed by a numeric-label import yields.
    pub fn without_isolated(&self) -> DirectedGraph {
        let mut remap = vec![u32::MAX; self.node_count()];
        let mut g = DirectedGraph::new();
        for v in self.nodes() {
            if self.out_degree(v) + self.in_degree(v) > 0 {
                remap[v.index()] = g.add_node(self.birth_turn(v)).0;
            }
        }
        for (s, d) in self.sorted_edges() {
            g.insert_edge(NodeId(remap[s.index()]), NodeId(remap[d.index()]));
        }
        g
    }

    /// Re-derives degree totals from the adjacency lists and checks the
    /// simple-digraph invariants.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let out_sum: usize = self.out_adj.iter().map(Vec::len).sum();
        let in_sum: usize = self.in_adj.iter().map(Vec::len).sum();
        if out_sum != self.edge_count() || in_sum != self.edge_count() {
            return Err(format!(
                "handshake violated: out {out_sum}, in {in_sum}, edges {}",
                self.edge_count()
            ));
        }
        let mut rebuilt_in = vec![0usize; self.node_count()];
        for (s, d) in self.edges() {
            if s == d {
                return Err(format!("self-loop at {s}"));
            }
            if !self.has_edge(s, d) {
                return Err(format!("edge {s}->{d} missing from edge set"));
            }
            rebuilt_in[d.index()] += 1;
        }
        for v in self.nodes() {
            if rebuilt_in[v.index()] != self.in_degree(v) {
                return Err(format!("in-degree of {v} inconsistent"));
            }
            if self.in_slice(v).iter().any(|&u| !self.has_edge(u, v)) {
                return Err(format!("in-list of {v} has a stale entry"));
            }
        }
        if self.birth_turn.windows(2).any(|w| w[0] > w[1]) {
            return Err("birth turns decrease".into());
        }
        Ok(())
    }
}

impl PartialEq for DirectedGraph {
    /// Same nodes (with birth turns) and the same edge set; adjacency order is
    /// not compared.
    fn eq(&self, other: &Self) -> bool {
        self.birth_turn == other.birth_turn && self.edge_set == other.edge_set
    }
}
