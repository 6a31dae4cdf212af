//! Bottom-up growth of directed follow networks from time-coupled entry and
//! activity rates plus four Bernoulli link rules, with the metric suite and
//! calibration tooling used to compare grown networks against collected ones.

pub mod baselines;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod rng;
pub mod rules;

pub use dynamics::{run, step, RunOutput, SimParams, SimState, TurnStats};
pub use error::{Error, Result};
pub use graph::{DirectedGraph, NodeId};
pub use rules::{Rule, RuleOutcome};
