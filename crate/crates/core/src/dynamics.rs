//! Turn scheduler coupling node entry and the shared action budget.
//!
//! Each turn adds `floor(n * nu + carry)` entrants, computes the budget
//! `floor(n * psi)` on the post-entry node count, splits it across the four
//! rules and runs them in activation order. Actions a rule leaves unspent roll
//! over into the next rule's share.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::rng::{self, SimRng};
use crate::rules::{self, EdgeQuota, Rule, RuleOutcome};

/// Absorbs float noise in products like `10 * 0.01` summed over turns.
const ROUNDING_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimParams {
    /// Entry rate: fraction of the current size that enters next turn.
    pub nu: f64,
    /// Actions per node per turn.
    pub psi: f64,
    /// Max edges a single node may create in one turn.
    pub kappa: u32,
    pub p_random: f64,
    pub p_triadic: f64,
    pub p_cumulative: f64,
    pub p_distance: f64,
    /// Size of the high in-degree list used by distance-assisted closure.
    pub top_k: usize,
    /// Require the top node to be within undirected distance 2 of ego.
    pub distance_check: bool,
    /// Isolated nodes in the seed graph.
    pub n0: usize,
    pub target_nodes: usize,
    pub seed: u64,
    /// Budget shares for randomness, triadic, cumulative, distance.
    pub budget_split: [f64; 4],
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            nu: 0.1,
            psi: 2.0,
            kappa: 3,
            p_random: 0.9,
            p_triadic: 0.35,
            p_cumulative: 0.1,
            p_distance: 0.2,
            top_k: 50,
            distance_check: true,
            n0: 10,
            target_nodes: 1000,
            seed: 1,
            budget_split: [0.1, 0.3, 0.3, 0.3],
        }
    }
}

impl SimParams {
    pub fn probability(&self, rule: Rule) -> f64 {
        match rule {
            Rule::Randomness => self.p_random,
            Rule::Triadic => self.p_triadic,
            Rule::Cumulative => self.p_cumulative,
            Rule::Distance => self.p_distance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |field, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::param(field, format!("{v} is outside [0, 1]")))
            }
        };
        unit("nu", self.nu)?;
        unit("p_random", self.p_random)?;
        unit("p_triadic", self.p_triadic)?;
        unit("p_cumulative", self.p_cumulative)?;
        unit("p_distance", self.p_distance)?;
        if !(self.psi >= 1.0 && self.psi.is_finite()) {
            return Err(Error::param("psi", format!("{} must be a finite value >= 1", self.psi)));
        }
        if self.kappa < 1 {
            return Err(Error::param("kappa", "must be at least 1"));
        }
        if self.top_k < 1 {
            return Err(Error::param("top_k", "must be at least 1"));
        }
        if self.n0 < 1 {
            return Err(Error::param("n0", "must be at least 1"));
        }
        if self.target_nodes < self.n0 {
            return Err(Error::param(
                "target_nodes",
                format!("{} is below n0 = {}", self.target_nodes, self.n0),
            ));
        }
        if self.budget_split.iter().any(|s| !(*s >= 0.0)) {
            return Err(Error::param("budget_split", "shares must be non-negative"));
        }
        let total: f64 = self.budget_split.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::param("budget_split", format!("shares sum to {total}, not 1")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnStats {
    pub turn: u32,
    pub entrants: usize,
    /// Node count after entry.
    pub nodes: usize,
    pub tau: u64,
    pub attempts_by_rule: [u64; 4],
    pub consumed_by_rule: [u64; 4],
    pub edges_by_rule: [u64; 4],
    /// Fractional entrant remainder carried into the next turn.
    pub carry: f64,
}

impl TurnStats {
    pub fn consumed(&self) -> u64 {
        self.consumed_by_rule.iter().sum()
    }

    pub fn edges(&self) -> u64 {
        self.edges_by_rule.iter().sum()
    }
}

/// `(floor(n * nu + carry_in), remainder)`.
pub fn entry_count(n: usize, nu: f64, carry_in: f64) -> (usize, f64) {
    let total = n as f64 * nu + carry_in;
    let entrants = (total + ROUNDING_SLACK).floor();
    let carry = (total - entrants).max(0.0);
    (entrants as usize, carry)
}

/// `floor(n * psi)`.
pub fn action_budget(n: usize, psi: f64) -> u64 {
    (n as f64 * psi + ROUNDING_SLACK).floor() as u64
}

/// Splits `tau` by cumulative floors so the shares always sum to `tau`.
pub fn split_budget(tau: u64, split: &[f64; 4]) -> [u64; 4] {
    let mut shares = [0u64; 4];
    let mut cum = 0.0;
    let mut assigned = 0u64;
    for (i, share) in split.iter().enumerate() {
        cum += share;
        let upto = if i == 3 {
            tau
        } else {
            ((tau as f64 * cum + ROUNDING_SLACK).floor() as u64).min(tau)
        };
        shares[i] = upto.saturating_sub(assigned);
        assigned = assigned.max(upto);
    }
    shares
}

/// Mutable run state between turns.
#[derive(Debug, Clone)]
pub struct SimState {
    pub turn: u32,
    pub carry: f64,
    pub rng: SimRng,
    quota: EdgeQuota,
}

impl SimState {
    pub fn new(params: &SimParams) -> Self {
        Self {
            turn: 0,
            carry: 0.0,
            rng: rng::seeded(params.seed),
            quota: EdgeQuota::new(params.kappa),
        }
    }
}

/// Runs one turn. The graph must be non-empty.
pub fn step(graph: &mut DirectedGraph, params: &SimParams, state: &mut SimState) -> TurnStats {
    state.turn += 1;
    let n = graph.node_count();
    let (entrants, carry) = entry_count(n, params.nu, state.carry);
    state.carry = carry;
    let first = graph.node_count();
    for _ in 0..entrants {
        graph.add_node(state.turn);
    }
    let arrived: Vec<NodeId> = (first..graph.node_count()).map(NodeId::from).collect();

    let nodes = graph.node_count();
    let tau = action_budget(nodes, params.psi);
    let shares = split_budget(tau, &params.budget_split);
    state.quota.reset(nodes);

    let mut attempts_by_rule = [0u64; 4];
    let mut consumed_by_rule = [0u64; 4];
    let mut edges_by_rule = [0u64; 4];
    let mut rollover = 0u64;
    for (i, rule) in Rule::ALL.into_iter().enumerate() {
        let budget = shares[i] + rollover;
        let p = params.probability(rule);
        let rng = &mut state.rng;
        let quota = &mut state.quota;
        let outcome: RuleOutcome = match rule {
            Rule::Randomness => rules::rule_randomness(graph, &arrived, budget, p, quota, rng),
            Rule::Triadic => rules::rule_triadic(graph, budget, p, quota, rng),
            Rule::Cumulative => rules::rule_cumulative(graph, budget, p, quota, rng),
            Rule::Distance => rules::rule_distance_closure(
                graph,
                budget,
                p,
                params.top_k,
                params.distance_check,
                quota,
                rng,
            ),
        };
        debug_assert!(outcome.cost_identity_holds(rule));
        attempts_by_rule[i] = outcome.attempts;
        consumed_by_rule[i] = outcome.actions_consumed;
        edges_by_rule[i] = outcome.successes;
        rollover = budget - outcome.actions_consumed;
    }

    TurnStats {
        turn: state.turn,
        entrants,
        nodes,
        tau,
        attempts_by_rule,
        consumed_by_rule,
        edges_by_rule,
        carry,
    }
}

/// Full simulation output.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub graph: DirectedGraph,
    pub ledger: Vec<TurnStats>,
}

/// Seeds `n0` isolated nodes and steps until the node count reaches
/// `target_nodes`.
pub fn run(params: &SimParams) -> Result<RunOutput> {
    params.validate()?;
    if params.nu == 0.0 && params.target_nodes > params.n0 {
        return Err(Error::NonGrowing {
            n0: params.n0,
            target: params.target_nodes,
        });
    }
    let mut graph = DirectedGraph::with_nodes(params.n0);
    let mut state = SimState::new(params);
    let mut ledger = Vec::new();
    while graph.node_count() < params.target_nodes {
        ledger.push(step(&mut graph, params, &mut state));
    }
    log::debug!(
        "run finished: {} turns, {} nodes, {} edges",
        ledger.len(),
        graph.node_count(),
        graph.edge_count()
    );
    Ok(RunOutput { graph, ledger })
}

pub const LEDGER_HEADER: &str = "turn,entrants,tau,attempts_r1,attempts_r2,attempts_r3,attempts_r4,\
consumed_r1,consumed_r2,consumed_r3,consumed_r4,edges_r1,edges_r2,edges_r3,edges_r4";

/// One CSV row per turn.
pub fn write_ledger_csv<W: Write>(ledger: &[TurnStats], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{LEDGER_HEADER}")?;
    for t in ledger {
        let (a, c, e) = (t.attempts_by_rule, t.consumed_by_rule, t.edges_by_rule);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            t.turn, t.entrants, t.tau, a[0], a[1], a[2], a[3], c[0], c[1], c[2], c[3], e[0], e[1], e[2], e[3]
        )?;
    }
    Ok(())
}
