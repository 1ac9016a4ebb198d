//! Monte-Carlo experiments: many runs of one model on one dataset, each with
//! freshly sampled weights and node parameters, summarized and written out.
//!
//! Every run draws from three independent ChaCha8 streams. The 32-byte key is
//! `master_seed` (little endian, 8 bytes), then a purpose tag (little endian,
//! 8 bytes: 1 for weights, 2 for node parameters, 3 for the engine), then 16
//! zero bytes; the stream number is the run index. Run `r` therefore sees the
//! same numbers whatever the number of runs or workers.

mod config;
mod stats;

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use config::{default_mode, parse_pairs, ExperimentConfig, MAX_DELAY_FRACTION, TAU_MAX};
pub use stats::{dataset_stats, DatasetStats};

use crate::dynamics::{ModelParams, NodeParams, Step, TieBreakRule};
use crate::engine::{
    activation_end, compute_horizon, run_noncompetitive, simulate, Campaign, EventKind, Model, Trace,
    UNBOUNDED_HORIZON,
};
use crate::error::{Error, Result};
use crate::graph::{
    read_edge_list, restrict_for_diffusion, sample_weights, trust_fraction, DiffusionGraph, NodeId,
    TrustNetwork,
};
use crate::metrics::{
    activation_loss, aggregate_runs, aggregate_series, cumulative_transitions, deactivation_stats,
    quiescent_series, shared_spread_stats, spread_series, stressed_split, switch_stats, Accumulator,
    MetricSeries, PerCampaign, SharedStats, Summary, TransitionCounts,
};
use crate::seeding::{select, SeedRanking, Strategy};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "FFDLT_WORKERS";

/// Worker count from [`WORKERS_ENV`], else the available parallelism.
pub fn workers_from_env() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Weights = 1,
    NodeParams = 2,
    Engine = 3,
}

/// The random stream of `run` for `purpose`.
pub fn run_rng(master_seed: u64, purpose: Purpose, run: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(run);
    rng
}

/// Samples the weighted graph of run `run`.
pub fn run_graph(network: &Arc<TrustNetwork>, p: f64, master_seed: u64, run: u64) -> Result<DiffusionGraph> {
    sample_weights(network.clone(), p, &mut run_rng(master_seed, Purpose::Weights, run))
}

/// Node parameters of run `run`.
pub fn run_node_params(n: usize, master_seed: u64, run: u64) -> NodeParams {
    NodeParams::sample(n, TAU_MAX, &mut run_rng(master_seed, Purpose::NodeParams, run))
}

/// Everything one run produced.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub run: usize,
    pub horizon: Step,
    pub delay_b: Step,
    pub seeds_a: Vec<(NodeId, f64)>,
    pub seeds_b: Vec<(NodeId, f64)>,
    pub shortfall: bool,
    pub skipped_seeds_b: usize,
    /// Series in output order.
    pub series: Vec<MetricSeries>,
    pub switches: Option<PerCampaign<TransitionCounts>>,
    pub deactivations: Option<PerCampaign<TransitionCounts>>,
    pub shared: Option<SharedStats>,
    pub trace: Option<Trace>,
}

/// A loaded dataset, restricted and ready for runs.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub full_stats: DatasetStats,
    pub network: Arc<TrustNetwork>,
    pub trust_fraction: f64,
    static_rankings: HashMap<Strategy, SeedRanking>,
    fixed_graph: Option<DiffusionGraph>,
}

impl Experiment {
    /// Reads the dataset named in `config`.
    pub fn prepare(config: ExperimentConfig) -> Result<Self> {
        let net = read_edge_list(&config.dataset, config.format)?;
        Self::from_network(config, &net)
    }

    /// Uses an in-memory network in place of the configured dataset.
    pub fn from_network(config: ExperimentConfig, full: &TrustNetwork) -> Result<Self> {
        config.validate()?;
        let full_stats = dataset_stats(full);
        let network = Arc::new(restrict_for_diffusion(full, config.mode));
        let p = trust_fraction(&network)?;
        let strategies = std::iter::once(config.strategy).chain(config.strategy_b);
        let fixed_graph = match config.fixed_seeds_from_run {
            Some(r) => Some(run_graph(&network, p, config.master_seed, r as u64)?),
            None => None,
        };
        let mut static_rankings = HashMap::new();
        for s in strategies.filter(|s| !s.uses_weights()) {
            // static strategies read only signs and timestamps
            let unit = DiffusionGraph::with_weights(network.clone(), vec![0.0; network.edge_count()])?;
            static_rankings.insert(s, select(s, &unit, config.k, config.newcomer_inverted)?);
        }
        log::info!(
            "{}: {} nodes, {} edges after restriction, p = {:.4}",
            config.dataset.display(),
            network.node_count(),
            network.edge_count(),
            p
        );
        Ok(Experiment {
            config,
            full_stats,
            network,
            trust_fraction: p,
            static_rankings,
            fixed_graph,
        })
    }

    fn ranking<'a>(&'a self, strategy: Strategy, g: &DiffusionGraph) -> Result<Cow<'a, SeedRanking>> {
        if let Some(r) = self.static_rankings.get(&strategy) {
            return Ok(Cow::Borrowed(r));
        }
        let g = self.fixed_graph.as_ref().unwrap_or(g);
        select(strategy, g, self.config.k, self.config.newcomer_inverted).map(Cow::Owned)
    }

    /// Executes all runs on a pool of `workers` threads; results are in run
    /// order.
    pub fn execute(&self, workers: usize) -> Result<Vec<RunOutput>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
        pool.install(|| {
            (0..self.config.runs)
                .into_par_iter()
                .map(|r| self.run_one(r))
                .collect()
        })
    }

    /// Executes run `r`.
    pub fn run_one(&self, r: usize) -> Result<RunOutput> {
        let cfg = &self.config;
        let seed = cfg.master_seed;
        let g = run_graph(&self.network, self.trust_fraction, seed, r as u64)?;
        let nodes = run_node_params(g.node_count(), seed, r as u64);
        let mut rng = run_rng(seed, Purpose::Engine, r as u64);

        let rank_a = self.ranking(cfg.strategy, &g)?;
        let seeds_a = rank_a.seeds();
        let rank_b = cfg.strategy_b.map(|s| self.ranking(s, &g)).transpose()?;
        let seeds_b = rank_b.as_ref().map(|rb| rb.seeds_excluding(&seeds_a)).unwrap_or_default();
        let shortfall = rank_a.shortfall() || rank_b.as_ref().is_some_and(|rb| seeds_b.len() < rb.k);

        let params = ModelParams::new(cfg.delta, cfg.lambda, 1)?
            .with_tie_break(TieBreakRule::FixedProbability { prob_a: cfg.prob_a });

        let mut out = RunOutput {
            run: r,
            horizon: 0,
            delay_b: 0,
            seeds_a: scored(&rank_a, &seeds_a),
            seeds_b: rank_b.as_ref().map(|rb| scored(rb, &seeds_b)).unwrap_or_default(),
            shortfall,
            skipped_seeds_b: 0,
            series: Vec::new(),
            switches: None,
            deactivations: None,
            shared: None,
            trace: None,
        };

        let trace = if cfg.model == Model::Nc {
            let base_params = ModelParams {
                lambda: 0.0,
                ..params
            };
            let unbounded =
                run_noncompetitive(&g, &seeds_a, &nodes, &base_params.with_horizon(UNBOUNDED_HORIZON), &mut rng)?;
            let horizon = cfg.horizon.unwrap_or_else(|| activation_end(&unbounded));
            let base = unbounded.truncated(horizon);
            let trace = if cfg.lambda == 0.0 {
                base.clone()
            } else {
                run_noncompetitive(&g, &seeds_a, &nodes, &params.with_horizon(horizon), &mut rng)?
            };
            out.horizon = horizon;
            out.series.extend(spread_series(&trace));
            out.series.extend(quiescent_series(&trace));
            let (stressed, unstressed) = stressed_split(&trace, &g)?;
            out.series.push(stressed);
            out.series.push(unstressed);
            if cfg.lambda > 0.0 {
                let loss = activation_loss(&base, &trace)?;
                if loss.values.iter().any(|&x| x < 0.0) {
                    log::debug!("run {r}: negative activation loss");
                }
                out.series.push(loss);
            }
            if cfg.strategy_b.is_some() {
                let trace_b = run_noncompetitive(&g, &seeds_b, &nodes, &params.with_horizon(horizon), &mut rng)?;
                out.shared = Some(shared_spread_stats(&trace, &trace_b)?);
            }
            trace
        } else {
            let horizon = match cfg.horizon {
                Some(h) => h,
                None => compute_horizon(&g, &seeds_a, &nodes, &params)?,
            };
            let delay_b = (cfg.delay_fraction * horizon as f64).floor() as Step;
            let run_params = params.with_horizon(horizon);
            let trace = simulate(cfg.model, &g, &seeds_a, &seeds_b, delay_b, &nodes, &run_params, &mut rng)?;
            out.horizon = horizon;
            out.delay_b = delay_b;
            out.skipped_seeds_b = trace.meta.skipped_seeds_b.len();
            out.series.extend(spread_series(&trace));
            out.series.extend(quiescent_series(&trace));
            out.series.extend(cumulative_transitions(&trace, EventKind::Switch));
            out.switches = Some(switch_stats(&trace)?);
            if cfg.model == Model::Np {
                out.series.extend(cumulative_transitions(&trace, EventKind::Deactivate));
                out.deactivations = Some(deactivation_stats(&trace)?);
            }
            let trace_a = run_noncompetitive(&g, &seeds_a, &nodes, &run_params, &mut rng)?;
            let trace_b = run_noncompetitive(&g, &seeds_b, &nodes, &run_params, &mut rng)?;
            out.shared = Some(shared_spread_stats(&trace_a, &trace_b)?);
            trace
        };
        if cfg.traces {
            let mut trace = trace;
            trace.meta.rng_seed = Some(seed);
            out.trace = Some(trace);
        }
        Ok(out)
    }
}

fn scored(ranking: &SeedRanking, seeds: &[NodeId]) -> Vec<(NodeId, f64)> {
    seeds
        .iter()
        .map(|&v| {
            let score = ranking.entries.iter().find(|e| e.0 == v).map_or(0.0, |e| e.1);
            (v, score)
        })
        .collect()
}

/// Per-step mean, std, min and max of one series over runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSummary {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl SeriesSummary {
    fn from_steps(steps: &[Summary]) -> Self {
        SeriesSummary {
            mean: steps.iter().map(|s| s.mean).collect(),
            std: steps.iter().map(|s| s.std).collect(),
            min: steps.iter().map(|s| s.min).collect(),
            max: steps.iter().map(|s| s.max).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountSummary {
    pub unique: Summary,
    pub total: Summary,
}

/// [`SharedStats`] fields summarized over runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharedSummary {
    #[serde(rename = "spread_A")]
    pub spread_a: Summary,
    #[serde(rename = "spread_B")]
    pub spread_b: Summary,
    pub shared_fraction: Summary,
    #[serde(rename = "pct_A_first")]
    pub pct_a_first: Summary,
    pub avg_time_any: Summary,
    #[serde(rename = "avg_time_A_first")]
    pub avg_time_a_first: Summary,
    #[serde(rename = "avg_time_B_first")]
    pub avg_time_b_first: Summary,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub runs: usize,
    pub model: Model,
    pub horizon: Summary,
    pub delay_b: Summary,
    pub skipped_seeds_b: Summary,
    pub seed_shortfall: bool,
    /// Metric, then campaign.
    pub final_values: BTreeMap<String, BTreeMap<String, Summary>>,
    pub series: BTreeMap<String, BTreeMap<String, SeriesSummary>>,
    pub switch_stats: Option<PerCampaign<CountSummary>>,
    pub deactivation_stats: Option<PerCampaign<CountSummary>>,
    pub shared_stats: Option<SharedSummary>,
}

impl ExperimentSummary {
    /// Per-step means of `metric` for `campaign`.
    pub fn mean_series(&self, metric: &str, campaign: Campaign) -> Option<&[f64]> {
        self.series
            .get(metric)?
            .get(&campaign.to_string())
            .map(|s| s.mean.as_slice())
    }
}

fn summarize_scalar(values: impl Iterator<Item = f64>) -> Summary {
    let mut acc = Accumulator::default();
    values.for_each(|x| acc.push(x));
    acc.finish().expect("at least one run")
}

fn summarize_counts(
    runs: &[RunOutput],
    pick: impl Fn(&RunOutput) -> Option<PerCampaign<TransitionCounts>>,
) -> Option<PerCampaign<CountSummary>> {
    let all: Vec<_> = runs.iter().filter_map(&pick).collect();
    if all.is_empty() {
        return None;
    }
    let per = |c: Campaign| CountSummary {
        unique: summarize_scalar(all.iter().map(|p| p.get(c).unique as f64)),
        total: summarize_scalar(all.iter().map(|p| p.get(c).total as f64)),
    };
    Some(PerCampaign {
        a: per(Campaign::A),
        b: per(Campaign::B),
    })
}

/// Aggregates run outputs in run order.
pub fn summarize(model: Model, runs: &[RunOutput]) -> Result<ExperimentSummary> {
    if runs.is_empty() {
        return Err(Error::InvalidParams("no runs to summarize".into()));
    }
    let mut grouped: BTreeMap<(String, String), Vec<Vec<f64>>> = BTreeMap::new();
    for run in runs {
        for s in &run.series {
            let campaign = s.campaign.map_or_else(String::new, |c| c.to_string());
            grouped
                .entry((s.name.clone(), campaign))
                .or_default()
                .push(s.values.clone());
        }
    }
    let mut final_values: BTreeMap<String, BTreeMap<String, Summary>> = BTreeMap::new();
    let mut series: BTreeMap<String, BTreeMap<String, SeriesSummary>> = BTreeMap::new();
    for ((name, campaign), values) in grouped {
        let finals: Vec<f64> = values.iter().map(|v| v.last().copied().unwrap_or(0.0)).collect();
        final_values
            .entry(name.clone())
            .or_default()
            .insert(campaign.clone(), aggregate_runs(&finals).expect("non-empty"));
        series
            .entry(name)
            .or_default()
            .insert(campaign, SeriesSummary::from_steps(&aggregate_series(&values)));
    }
    let shared: Vec<SharedStats> = runs.iter().filter_map(|r| r.shared).collect();
    let shared_stats = (!shared.is_empty()).then(|| {
        let f = |g: fn(&SharedStats) -> f64| summarize_scalar(shared.iter().map(g));
        SharedSummary {
            spread_a: f(|s| s.spread_a as f64),
            spread_b: f(|s| s.spread_b as f64),
            shared_fraction: f(|s| s.shared_fraction),
            pct_a_first: f(|s| s.pct_a_first),
            avg_time_any: f(|s| s.avg_time_any),
            avg_time_a_first: f(|s| s.avg_time_a_first),
            avg_time_b_first: f(|s| s.avg_time_b_first),
        }
    });
    Ok(ExperimentSummary {
        runs: runs.len(),
        model,
        horizon: summarize_scalar(runs.iter().map(|r| r.horizon as f64)),
        delay_b: summarize_scalar(runs.iter().map(|r| r.delay_b as f64)),
        skipped_seeds_b: summarize_scalar(runs.iter().map(|r| r.skipped_seeds_b as f64)),
        seed_shortfall: runs.iter().any(|r| r.shortfall),
        final_values,
        series,
        switch_stats: summarize_counts(runs, |r| r.switches),
        deactivation_stats: summarize_counts(runs, |r| r.deactivations),
        shared_stats,
    })
}

#[derive(Serialize)]
struct MetaFile<'a> {
    version: &'static str,
    config: BTreeMap<&'static str, String>,
    dataset: &'a DatasetStats,
    diffusion_nodes: usize,
    diffusion_edges: usize,
    trust_fraction: f64,
    run_seed_scheme: &'static str,
}

const SEED_SCHEME: &str = "ChaCha8, key = master_seed u64 LE | purpose u64 LE (weights 1, node params 2, engine 3) | 16 zero bytes, stream = run index";

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

impl Experiment {
    /// Writes `runs.csv`, `summary.json`, `seeds.csv`, `meta.json`,
    /// `node_map.csv` and, if enabled, `traces/run_<r>.trace` under `dir`.
    pub fn write_outputs(&self, dir: &Path, runs: &[RunOutput], summary: &ExperimentSummary) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let net = &self.network;

        let path = dir.join("runs.csv");
        let mut w = create(&path)?;
        let io = |e| Error::io(&path, e);
        writeln!(w, "run,step,metric,campaign,value").map_err(io)?;
        for run in runs {
            for s in &run.series {
                let campaign = s.campaign.map_or_else(String::new, |c| c.to_string());
                for (t, v) in s.values.iter().enumerate() {
                    writeln!(w, "{},{},{},{},{}", run.run, t, s.name, campaign, v).map_err(io)?;
                }
            }
        }
        w.flush().map_err(io)?;

        let path = dir.join("seeds.csv");
        let mut w = create(&path)?;
        let io = |e| Error::io(&path, e);
        writeln!(w, "run,campaign,rank,node,score").map_err(io)?;
        for run in runs {
            for (campaign, seeds) in [("A", &run.seeds_a), ("B", &run.seeds_b)] {
                for (i, &(v, score)) in seeds.iter().enumerate() {
                    writeln!(w, "{},{},{},{},{}", run.run, campaign, i + 1, net.label(v), score).map_err(io)?;
                }
            }
        }
        w.flush().map_err(io)?;

        let path = dir.join("node_map.csv");
        let mut w = create(&path)?;
        let io = |e| Error::io(&path, e);
        writeln!(w, "node,label").map_err(io)?;
        for v in net.nodes() {
            writeln!(w, "{},{}", v, net.label(v)).map_err(io)?;
        }
        w.flush().map_err(io)?;

        let path = dir.join("summary.json");
        let mut w = create(&path)?;
        serde_json::to_writer_pretty(&mut w, summary)?;
        writeln!(w).and_then(|_| w.flush()).map_err(|e| Error::io(&path, e))?;

        let meta = MetaFile {
            version: env!("CARGO_PKG_VERSION"),
            config: self.config.to_pairs().into_iter().collect(),
            dataset: &self.full_stats,
            diffusion_nodes: net.node_count(),
            diffusion_edges: net.edge_count(),
            trust_fraction: self.trust_fraction,
            run_seed_scheme: SEED_SCHEME,
        };
        let path = dir.join("meta.json");
        let mut w = create(&path)?;
        serde_json::to_writer_pretty(&mut w, &meta)?;
        writeln!(w).and_then(|_| w.flush()).map_err(|e| Error::io(&path, e))?;

        if runs.iter().any(|r| r.trace.is_some()) {
            let tdir = dir.join("traces");
            fs::create_dir_all(&tdir).map_err(|e| Error::io(&tdir, e))?;
            for run in runs {
                if let Some(trace) = &run.trace {
                    let path = tdir.join(format!("run_{}.trace", run.run));
                    let mut w = create(&path)?;
                    trace.write(&mut w)?;
                    w.flush().map_err(|e| Error::io(&path, e))?;
                }
            }
        }
        Ok(())
    }
}

/// Loads the dataset, executes every run and writes all outputs to
/// `config.output`.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<ExperimentSummary> {
    let exp = Experiment::prepare(config.clone())?;
    let runs = exp.execute(workers)?;
    let summary = summarize(config.model, &runs)?;
    exp.write_outputs(&config.output, &runs, &summary)?;
    Ok(summary)
}
