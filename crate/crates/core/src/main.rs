use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use backcloth::baselines::BaselineSpec;
use backcloth::cli;
use backcloth::config::{RunConfig, SweepSpec};
use backcloth::io::{fmt_g6, EdgeFormat, ObjectiveWeights};
use backcloth::{Error, Result};

/// Grow, measure and compare directed follow networks.
#[derive(Debug, Parser)]
#[command(name = "backcloth", version)]
struct Cli {
    /// TOML run config ([dynamics], [rules], [metrics], [output]).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Simulation seed (grow) or generator seed (baseline).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    target_nodes: Option<usize>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads for metrics and sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grow a network and write edges, turn ledger, metrics and manifest.
    Grow(GrowArgs),
    /// Compute the metric suite of an edge list.
    Metrics {
        input: PathBuf,
        #[arg(long, default_value = "auto")]
        format: EdgeFormat,
        /// Skip per-node centralities.
        #[arg(long)]
        no_centralities: bool,
    },
    /// Compare an edge list against a reference edge list.
    Compare {
        /// Reference network.
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value = "auto")]
        format: EdgeFormat,
        /// TOML file with objective weights.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Generate an Erdos-Renyi or preferential-attachment baseline.
    Baseline {
        #[command(subcommand)]
        kind: BaselineKind,
    },
    /// Evaluate a parameter grid against a target edge list.
    Sweep {
        spec: PathBuf,
        #[arg(long)]
        max_evaluations: Option<usize>,
        #[arg(long)]
        parallelism: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct GrowArgs {
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    psi: Option<f64>,
    #[arg(long)]
    kappa: Option<u32>,
    #[arg(long)]
    n0: Option<usize>,
    #[arg(long)]
    p_random: Option<f64>,
    #[arg(long)]
    p_triadic: Option<f64>,
    #[arg(long)]
    p_cumulative: Option<f64>,
    #[arg(long)]
    p_distance: Option<f64>,
    #[arg(long)]
    top_k: Option<usize>,
    /// Skip per-node centralities.
    #[arg(long)]
    no_centralities: bool,
}

#[derive(Debug, Subcommand)]
enum BaselineKind {
    /// Directed G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Preferential attachment with m edges per entrant.
    Pa {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn base_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    set(&mut cfg.dynamics.seed, cli.seed);
    set(&mut cfg.dynamics.target_nodes, cli.target_nodes);
    set(&mut cfg.output.dir, cli.out_dir.clone());
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Runtime(e.to_string()))?;
    }
    let mut cfg = base_config(&cli)?;
    cfg.validate()?;
    let bins = cfg.output.loglog_bins;
    match cli.command {
        Command::Grow(a) => {
            set(&mut cfg.dynamics.nu, a.nu);
            set(&mut cfg.dynamics.psi, a.psi);
            set(&mut cfg.dynamics.kappa, a.kappa);
            set(&mut cfg.dynamics.n0, a.n0);
            set(&mut cfg.rules.p_random, a.p_random);
            set(&mut cfg.rules.p_triadic, a.p_triadic);
            set(&mut cfg.rules.p_cumulative, a.p_cumulative);
            set(&mut cfg.rules.p_distance, a.p_distance);
            set(&mut cfg.rules.top_k, a.top_k);
            if a.no_centralities {
                cfg.metrics.centralities = false;
            }
            let s = cli::cmd_grow(&cfg)?;
            println!(
                "grew {} nodes, {} edges in {} turns ({:.2}s) -> {}",
                s.nodes,
                s.edges,
                s.turns,
                s.wall_seconds,
                cfg.output.dir.display()
            );
        }
        Command::Metrics { input, format, no_centralities } => {
            if no_centralities {
                cfg.metrics.centralities = false;
            }
            let r = cli::cmd_metrics(&input, format, &cfg.metrics, &cfg.output.dir, bins)?;
            print!("{}", backcloth::io::report_text(&r));
        }
        Command::Compare { left, right, format, weights } => {
            let weights = match weights {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                    toml::from_str::<ObjectiveWeights>(&text).map_err(|e| Error::Config(e.to_string()))?
                }
                None => ObjectiveWeights::default(),
            };
            let c = cli::cmd_compare(&left, &right, format, &cfg.metrics, &weights, &cfg.output.dir)?;
            print!("{}", backcloth::io::comparison_text(&c));
        }
        Command::Baseline { kind } => {
            let seed = cli.seed.unwrap_or(cfg.dynamics.seed);
            let spec = match kind {
                BaselineKind::Er { n, p } => BaselineSpec::ErdosRenyi { n, p, seed },
                BaselineKind::Pa { n, m } => BaselineSpec::PrefAttach { n, m, seed },
            };
            let r = cli::cmd_baseline(&spec, &cfg.metrics, &cfg.output.dir, bins)?;
            print!("{}", backcloth::io::report_text(&r));
        }
        Command::Sweep { spec, max_evaluations, parallelism } => {
            let mut s = SweepSpec::load(&spec)?;
            if max_evaluations.is_some() {
                s.max_evaluations = max_evaluations;
            }
            set(&mut s.parallelism, parallelism);
            set(&mut s.master_seed, cli.seed);
            set(&mut s.base.dynamics.target_nodes, cli.target_nodes);
            let summary = cli::cmd_sweep(&s, &cfg.output.dir)?;
            println!("evaluated {} points in {:.2}s", summary.rows.len(), summary.wall_seconds);
            if let Some(best) = summary.rows.first().and_then(|r| r.objective().map(|o| (r.index, o))) {
                println!("best: grid point {} objective {}", best.0, fmt_g6(best.1));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
