//! The four Bernoulli link-formation rules.
//!
//! Each rule spends a sub-budget of actions. A successful link costs
//! [`Rule::success_cost`] actions; every other attempt, including one that
//! proposes an existing edge, a self-loop, a link blocked by the per-turn
//! quota, or a link whose cost exceeds the remaining budget, costs 1.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::graph::{DirectedGraph, NodeId};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Randomness,
    Triadic,
    Cumulative,
    Distance,
}

impl Rule {
    /// Activation order within a turn.
    pub const ALL: [Rule; 4] = [Rule::Randomness, Rule::Triadic, Rule::Cumulative, Rule::Distance];

    pub fn success_cost(self) -> u64 {
        match self {
            Rule::Triadic => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::Randomness => "randomness",
            Rule::Triadic => "triadic",
            Rule::Cumulative => "cumulative",
            Rule::Distance => "distance",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleOutcome {
    pub attempts: u64,
    pub successes: u64,
    pub actions_consumed: u64,
}

impl RuleOutcome {
    /// `actions = successes * cost + failures`.
    pub fn cost_identity_holds(&self, rule: Rule) -> bool {
        self.successes <= self.attempts
            && self.actions_consumed
                == self.successes * rule.success_cost() + (self.attempts - self.successes)
    }
}

/// Per-turn cap on the number of edges a node may create.
#[derive(Debug, Clone)]
pub struct EdgeQuota {
    kappa: u32,
    used: Vec<u32>,
}

impl EdgeQuota {
    pub fn new(kappa: u32) -> Self {
        Self {
            kappa,
            used: Vec::new(),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u32::MAX)
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    /// Clears all counters; called at the start of every turn.
    pub fn reset(&mut self, node_count: usize) {
        self.used.clear();
        self.used.resize(node_count, 0);
    }

    fn sync(&mut self, node_count: usize) {
        if self.used.len() < node_count {
            self.used.resize(node_count, 0);
        }
    }

    #[inline]
    fn allows(&self, v: NodeId) -> bool {
        self.used[v.index()] < self.kappa
    }

    #[inline]
    fn record(&mut self, v: NodeId) {
        self.used[v.index()] += 1;
    }

    pub fn used(&self, v: NodeId) -> u32 {
        self.used.get(v.index()).copied().unwrap_or(0)
    }
}

/// Mutable state threaded through one rule invocation.
struct Attempts<'a> {
    rule: Rule,
    remaining: u64,
    quota: &'a mut EdgeQuota,
    outcome: RuleOutcome,
}

impl<'a> Attempts<'a> {
    fn new(rule: Rule, budget: u64, graph: &DirectedGraph, quota: &'a mut EdgeQuota) -> Self {
        quota.sync(graph.node_count());
        Self {
            rule,
            remaining: budget,
            quota,
            outcome: RuleOutcome::default(),
        }
    }

    #[inline]
    fn has_budget(&self) -> bool {
        self.remaining > 0
    }

    #[inline]
    fn fail(&mut self) {
        self.outcome.attempts += 1;
        self.outcome.actions_consumed += 1;
        self.remaining -= 1;
    }

    #[inline]
    fn link(&mut self, graph: &mut DirectedGraph, src: NodeId, dst: NodeId) -> bool {
        let cost = self.rule.success_cost();
        if self.remaining >= cost && self.quota.allows(src) && graph.insert_edge(src, dst) {
            self.quota.record(src);
            self.outcome.attempts += 1;
            self.outcome.successes += 1;
            self.outcome.actions_consumed += cost;
            self.remaining -= cost;
            true
        } else {
            self.fail();
            false
        }
    }
}

/// Each entrant gets one Bernoulli test; on success it follows a uniformly
/// chosen node that was present before the entrant batch (ids below the
/// smallest entrant id).
pub fn rule_randomness<R: RngCore + ?Sized>(
    graph: &mut DirectedGraph,
    entrants: &[NodeId],
    budget: u64,
    p: f64,
    quota: &mut EdgeQuota,
    rng: &mut R,
) -> RuleOutcome {
    let pool = entrants.iter().map(|v| v.index()).min().unwrap_or(0);
    let mut at = Attempts::new(Rule::Randomness, budget, graph, quota);
    for &entrant in entrants {
        if !at.has_budget() {
            break;
        }
        if rng::bernoulli(rng, p) && pool > 0 {
            let target = NodeId::from(rng::index(rng, pool));
            at.link(graph, entrant, target);
        } else {
            at.fail();
        }
    }
    at.outcome
}

/// Random ego follows a random out-neighbor of a random out-neighbor.
pub fn rule_triadic<R: RngCore + ?Sized>(
    graph: &mut DirectedGraph,
    budget: u64,
    p: f64,
    quota: &mut EdgeQuota,
    rng: &mut R,
) -> RuleOutcome {
    let n = graph.node_count();
    let mut at = Attempts::new(Rule::Triadic, budget, graph, quota);
    if n == 0 {
        return at.outcome;
    }
    while at.has_budget() {
        let ego = NodeId::from(rng::index(rng, n));
        if !rng::bernoulli(rng, p) {
            at.fail();
            continue;
        }
        let friends = graph.out_slice(ego);
        if friends.is_empty() {
            at.fail();
            continue;
        }
        let friend = friends[rng::index(rng, friends.len())];
        let candidates = graph.out_slice(friend);
        if candidates.is_empty() {
            at.fail();
            continue;
        }
        let candidate = candidates[rng::index(rng, candidates.len())];
        at.link(graph, ego, candidate);
    }
    at.outcome
}

/// Two distinct random nodes `(a, b)`; `a` follows `b` if `b` has strictly
/// higher in-degree and the Bernoulli test passes.
pub fn rule_cumulative<R: RngCore + ?Sized>(
    graph: &mut DirectedGraph,
    budget: u64,
    p: f64,
    quota: &mut EdgeQuota,
    rng: &mut R,
) -> RuleOutcome {
    let n = graph.node_count();
    let mut at = Attempts::new(Rule::Cumulative, budget, graph, quota);
    if n < 2 {
        while at.has_budget() {
            at.fail();
        }
        return at.outcome;
    }
    while at.has_budget() {
        let a = rng::index(rng, n);
        let mut b = rng::index(rng, n - 1);
        if b >= a {
            b += 1;
        }
        let (a, b) = (NodeId::from(a), NodeId::from(b));
        let pass = rng::bernoulli(rng, p);
        if pass && graph.in_degree(b) > graph.in_degree(a) {
            at.link(graph, a, b);
        } else {
            at.fail();
        }
    }
    at.outcome
}

/// The `k` nodes with the highest in-degree, ties broken by lower id, in
/// descending in-degree order.
pub fn top_nodes(graph: &DirectedGraph, k: usize) -> Vec<NodeId> {
    let n = graph.node_count();
    let k = k.min(n);
    if k == 0 {
        return Vec::new();
    }
    let rank = |v: &NodeId| (std::cmp::Reverse(graph.in_degree(*v)), *v);
    let mut all: Vec<NodeId> = graph.nodes().collect();
    if k < n {
        all.select_nth_unstable_by_key(k - 1, rank);
        all.truncate(k);
    }
    all.sort_unstable_by_key(rank);
    all
}

/// Undirected distance between `a` and `b` is at most 2.
pub fn within_two(graph: &DirectedGraph, a: NodeId, b: NodeId) -> bool {
    if a == b || graph.adjacent(a, b) {
        return true;
    }
    let deg = |v: NodeId| graph.out_degree(v) + graph.in_degree(v);
    let (small, other) = if deg(a) <= deg(b) { (a, b) } else { (b, a) };
    graph
        .out_slice(small)
        .iter()
        .chain(graph.in_slice(small))
        .any(|&u| graph.adjacent(u, other))
}

/// Random ego follows a random member of the current top-`k` in-degree list,
/// optionally only when that node is within undirected distance 2.
pub fn rule_distance_closure<R: RngCore + ?Sized>(
    graph: &mut DirectedGraph,
    budget: u64,
    p: f64,
    top_k: usize,
    distance_check: bool,
    quota: &mut EdgeQuota,
    rng: &mut R,
) -> RuleOutcome {
    let n = graph.node_count();
    let top = top_nodes(graph, top_k);
    let mut at = Attempts::new(Rule::Distance, budget, graph, quota);
    if top.is_empty() {
        return at.outcome;
    }
    while at.has_budget() {
        let ego = NodeId::from(rng::index(rng, n));
        let hub = top[rng::index(rng, top.len())];
        let pass = rng::bernoulli(rng, p);
        if pass && ego != hub && (!distance_check || within_two(graph, ego, hub)) {
            at.link(graph, ego, hub);
        } else {
            at.fail();
        }
    }
    at.outcome
}
