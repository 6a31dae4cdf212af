//! Run and sweep configuration documents (TOML).
//!
//! A run config has four sections; every field is optional and falls back to
//! the documented default:
//!
//! ```toml
//! [dynamics]
//! nu = 0.1                # entry rate
//! psi = 2.0               # actions per node per turn
//! kappa = 3               # max edges a node creates per turn
//! n0 = 10                 # isolated seed nodes
//! target_nodes = 1000
//! seed = 1
//! budget_split = [0.1, 0.3, 0.3, 0.3]
//!
//! [rules]
//! p_random = 0.9
//! p_triadic = 0.35
//! p_cumulative = 0.1
//! p_distance = 0.2
//! top_k = 50
//! distance_check = true
//!
//! [metrics]
//! exact_threshold = 20000
//! sample_sources = 512
//! eigen_tol = 1e-9
//! eigen_max_iter = 1000
//! seed = 0
//! centralities = true
//!
//! [output]
//! dir = "out"
//! loglog_bins = 20
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::SimParams;
use crate::error::{Error, Result};
use crate::io::{EdgeFormat, ObjectiveWeights};
use crate::metrics::MetricSettings;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsSection {
    pub nu: f64,
    pub psi: f64,
    pub kappa: u32,
    pub n0: usize,
    pub target_nodes: usize,
    pub seed: u64,
    pub budget_split: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RulesSection {
    pub p_random: f64,
    pub p_triadic: f64,
    pub p_cumulative: f64,
    pub p_distance: f64,
    pub top_k: usize,
    pub distance_check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Log bins for the distribution exports; 0 writes raw points only.
    pub loglog_bins: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            loglog_bins: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub dynamics: DynamicsSection,
    pub rules: RulesSection,
    pub metrics: MetricSettings,
    pub output: OutputSection,
}

impl Default for DynamicsSection {
    fn default() -> Self {
        let p = SimParams::default();
        Self {
            nu: p.nu,
            psi: p.psi,
            kappa: p.kappa,
            n0: p.n0,
            target_nodes: p.target_nodes,
            seed: p.seed,
            budget_split: p.budget_split,
        }
    }
}

impl Default for RulesSection {
    fn default() -> Self {
        let p = SimParams::default();
        Self {
            p_random: p.p_random,
            p_triadic: p.p_triadic,
            p_cumulative: p.p_cumulative,
            p_distance: p.p_distance,
            top_k: p.top_k,
            distance_check: p.distance_check,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::from_params(&SimParams::default())
    }
}

impl RunConfig {
    pub fn from_params(p: &SimParams) -> Self {
        Self {
            dynamics: DynamicsSection {
                nu: p.nu,
                psi: p.psi,
                kappa: p.kappa,
                n0: p.n0,
                target_nodes: p.target_nodes,
                seed: p.seed,
                budget_split: p.budget_split,
            },
            rules: RulesSection {
                p_random: p.p_random,
                p_triadic: p.p_triadic,
                p_cumulative: p.p_cumulative,
                p_distance: p.p_distance,
                top_k: p.top_k,
                distance_check: p.distance_check,
            },
            metrics: MetricSettings::default(),
            output: OutputSection::default(),
        }
    }

    pub fn params(&self) -> SimParams {
        let (d, r) = (&self.dynamics, &self.rules);
        SimParams {
            nu: d.nu,
            psi: d.psi,
            kappa: d.kappa,
            p_random: r.p_random,
            p_triadic: r.p_triadic,
            p_cumulative: r.p_cumulative,
            p_distance: r.p_distance,
            top_k: r.top_k,
            distance_check: r.distance_check,
            n0: d.n0,
            target_nodes: d.target_nodes,
            seed: d.seed,
            budget_split: d.budget_split,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params().validate()?;
        let m = &self.metrics;
        if m.sample_sources == 0 {
            return Err(Error::param("metrics.sample_sources", "must be at least 1"));
        }
        if !(m.eigen_tol > 0.0) {
            return Err(Error::param("metrics.eigen_tol", "must be positive"));
        }
        if m.eigen_max_iter == 0 {
            return Err(Error::param("metrics.eigen_max_iter", "must be at least 1"));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read_config(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }
}

fn read_config(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// How sweep points are seeded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedMode {
    /// `derive_seed(master_seed, point_index)`: independent streams.
    #[default]
    Derived,
    /// Every point reuses `master_seed` (common random numbers).
    Common,
}

/// Value lists per swept parameter; an absent list keeps the base value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub nu: Option<Vec<f64>>,
    pub psi: Option<Vec<f64>>,
    pub p_random: Option<Vec<f64>>,
    pub p_triadic: Option<Vec<f64>>,
    pub p_cumulative: Option<Vec<f64>>,
    pub p_distance: Option<Vec<f64>>,
    pub top_k: Option<Vec<usize>>,
    pub budget_split: Option<Vec<[f64; 4]>>,
}

fn axis<T: Clone>(name: &str, values: &Option<Vec<T>>, base: T) -> Result<Vec<T>> {
    match values {
        None => Ok(vec![base]),
        Some(v) if v.is_empty() => Err(Error::Config(format!("grid.{name} is empty"))),
        Some(v) => Ok(v.clone()),
    }
}

impl Grid {
    /// Cartesian product in a fixed axis order (the last axis varies fastest).
    pub fn points(&self, base: &SimParams) -> Result<Vec<SimParams>> {
        let nu = axis("nu", &self.nu, base.nu)?;
        let psi = axis("psi", &self.psi, base.psi)?;
        let pr = axis("p_random", &self.p_random, base.p_random)?;
        let pt = axis("p_triadic", &self.p_triadic, base.p_triadic)?;
        let pc = axis("p_cumulative", &self.p_cumulative, base.p_cumulative)?;
        let pd = axis("p_distance", &self.p_distance, base.p_distance)?;
        let tk = axis("top_k", &self.top_k, base.top_k)?;
        let bs = axis("budget_split", &self.budget_split, base.budget_split)?;
        let mut out = Vec::new();
        for &nu in &nu {
            for &psi in &psi {
                for &p_random in &pr {
                    for &p_triadic in &pt {
                        for &p_cumulative in &pc {
                            for &p_distance in &pd {
                                for &top_k in &tk {
                                    for &budget_split in &bs {
                                        out.push(SimParams {
                                            nu,
                                            psi,
                                            p_random,
                                            p_triadic,
                                            p_cumulative,
                                            p_distance,
                                            top_k,
                                            budget_split,
                                            ..base.clone()
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    /// Reference edge list the grid is calibrated against.
    pub target: PathBuf,
    pub format: EdgeFormat,
    pub grid: Grid,
    pub weights: ObjectiveWeights,
    /// Evaluate a seeded random subset of this many points.
    pub max_evaluations: Option<usize>,
    /// Worker threads for sweep points; 0 uses the ambient pool.
    pub parallelism: usize,
    pub master_seed: u64,
    pub seed_mode: SeedMode,
    /// Seeds the subsampling when `max_evaluations` is below the grid size.
    pub subsample_seed: u64,
    /// Values for everything not on the grid, plus metric settings.
    pub base: RunConfig,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            target: PathBuf::new(),
            format: EdgeFormat::Auto,
            grid: Grid::default(),
            weights: ObjectiveWeights::default(),
            max_evaluations: None,
            parallelism: 0,
            master_seed: 1,
            seed_mode: SeedMode::Derived,
            subsample_seed: 0,
            base: RunConfig::default(),
        }
    }
}

impl SweepSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Loads a spec; a relative `target` is resolved against the spec's
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut spec = Self::from_toml(&read_config(path)?)?;
        if spec.target.is_relative() {
            if let Some(dir) = path.parent() {
                spec.target = dir.join(&spec.target);
            }
        }
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.target.as_os_str().is_empty() {
            return Err(Error::Config("sweep target path is required".into()));
        }
        if self.max_evaluations == Some(0) {
            return Err(Error::Config("max_evaluations must be at least 1".into()));
        }
        self.weights.validate()?;
        self.base.validate()?;
        for p in self.grid.points(&self.base.params())? {
            p.validate()?;
        }
        Ok(())
    }
}
