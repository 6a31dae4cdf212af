//! Null-model generators: uniform random digraphs and degree-proportional
//! cumulative advantage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaselineSpec {
    ErdosRenyi { n: usize, p: f64, seed: u64 },
    PrefAttach { n: usize, m: usize, seed: u64 },
}

impl BaselineSpec {
    pub fn generate(&self) -> Result<DirectedGraph> {
        match *self {
            BaselineSpec::ErdosRenyi { n, p, seed } => generate_erdos_renyi(n, p, seed),
            BaselineSpec::PrefAttach { n, m, seed } => generate_pref_attach(n, m, seed),
        }
    }
}

/// Every ordered pair `(i, j)`, `i != j`, is an edge independently with
/// probability `p`. Uses geometric skips over the pair index, so the cost is
/// proportional to the number of edges drawn.
pub fn generate_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<DirectedGraph> {
    if n < 2 {
        return Err(Error::param("n", "erdos_renyi needs at least 2 nodes"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("{p} is outside [0, 1]")));
    }
    let mut g = DirectedGraph::with_nodes(n);
    let row = (n - 1) as u64;
    let pairs = n as u64 * row;
    let add = |idx: u64, g: &mut DirectedGraph| {
        let src = (idx / row) as usize;
        let mut dst = (idx % row) as usize;
        if dst >= src {
            dst += 1;
        }
        g.insert_edge(NodeId::from(src), NodeId::from(dst));
    };
    if p == 0.0 {
        return Ok(g);
    }
    if p == 1.0 {
        for idx in 0..pairs {
            add(idx, &mut g);
        }
        return Ok(g);
    }
    let mut r = rng::seeded(seed);
    let log_q = (1.0 - p).ln();
    let mut idx: u64 = 0;
    loop {
        let u = 1.0 - rng::unit(&mut r);
        let skip = (u.ln() / log_q).floor();
        if skip >= (pairs - idx) as f64 {
            break;
        }
        idx += skip as u64;
        add(idx, &mut g);
        idx += 1;
        if idx >= pairs {
            break;
        }
    }
    Ok(g)
}

/// Cumulative advantage: a seed clique on `m + 1` nodes, then every entrant
/// follows `m` distinct existing nodes chosen with probability proportional
/// to their current total degree.
pub fn generate_pref_attach(n: usize, m: usize, seed: u64) -> Result<DirectedGraph> {
    if m < 1 {
        return Err(Error::param("m", "must be at least 1"));
    }
    if n <= m + 1 {
        return Err(Error::param("n", format!("must exceed m + 1 = {}", m + 1)));
    }
    let mut g = DirectedGraph::with_nodes(m + 1);
    // each edge contributes both endpoints, so a uniform pick from this list
    // is a degree-proportional pick
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * m * n);
    for i in 0..=m {
        for j in 0..i {
            g.insert_edge(NodeId::from(i), NodeId::from(j));
            endpoints.push(NodeId::from(i));
            endpoints.push(NodeId::from(j));
        }
    }
    let mut r = rng::seeded(seed);
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for _ in m + 1..n {
        let v = g.add_node(0);
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng::index(&mut r, endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            g.insert_edge(v, t);
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{ccdf_loglog_slope, degrees, Direction};

    #[test]
    fn er_extremes() {
        assert_eq!(generate_erdos_renyi(10, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(generate_erdos_renyi(10, 1.0, 1).unwrap().edge_count(), 90);
    }

    #[test]
    fn er_edge_count_within_four_sigma() {
        let g = generate_erdos_renyi(500, 0.01, 7).unwrap();
        let pairs = 500.0 * 499.0;
        let mean = 0.01 * pairs;
        let sd = (pairs * 0.01 * 0.99f64).sqrt();
        assert!((g.edge_count() as f64 - mean).abs() < 4.0 * sd, "{}", g.edge_count());
        g.validate().unwrap();
    }

    #[test]
    fn er_rejects_bad_args() {
        assert!(generate_erdos_renyi(1, 0.5, 0).is_err());
        assert!(generate_erdos_renyi(5, 1.5, 0).is_err());
    }

    #[test]
    fn pa_symmetric_seed_pair() {
        let mut hits = [0usize; 2];
        for seed in 0..4000 {
            let g = generate_pref_attach(3, 1, seed).unwrap();
            let t = g.out_slice(NodeId(2))[0];
            hits[t.index()] += 1;
        }
        // binomial(4000, 1/2): sd ~ 31.6
        assert!(hits[0].abs_diff(2000) < 130, "{hits:?}");
    }

    #[test]
    fn pa_entrants_have_out_degree_m() {
        let g = generate_pref_attach(2000, 3, 5).unwrap();
        for v in 4..2000 {
            assert_eq!(g.out_degree(NodeId(v)), 3);
        }
        g.validate().unwrap();
        assert_eq!(g.edge_count(), 6 + 3 * (2000 - 4));
    }

    #[test]
    fn pa_is_deterministic() {
        let a = generate_pref_attach(500, 2, 3).unwrap();
        let b = generate_pref_attach(500, 2, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pa_rejects_small_n() {
        assert!(generate_pref_attach(3, 2, 0).is_err());
        assert!(generate_pref_attach(10, 0, 0).is_err());
    }

    #[test]
    fn pa_tail_is_heavy() {
        let g = generate_pref_attach(20_000, 2, 1).unwrap();
        let slope = ccdf_loglog_slope(&degrees(&g, Direction::In), 5, 10).unwrap();
        assert!((-2.5..=-1.5).contains(&slope), "{slope}");
    }
}
