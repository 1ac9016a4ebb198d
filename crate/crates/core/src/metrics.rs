//! Measurements over traces and their aggregation across runs.

use serde::{Deserialize, Serialize};

use crate::dynamics::Step;
use crate::engine::{Campaign, EventKind, Model, Status, Trace, UNBOUNDED_HORIZON};
use crate::error::{Error, Result};
use crate::graph::DiffusionGraph;

/// One value per step `0..=horizon` for a named measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSeries {
    pub name: String,
    pub campaign: Option<Campaign>,
    pub values: Vec<f64>,
}

impl MetricSeries {
    pub fn new(name: &str, campaign: Option<Campaign>, values: Vec<f64>) -> Self {
        MetricSeries {
            name: name.to_string(),
            campaign,
            values,
        }
    }

    pub fn last(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Number of steps a series of `trace` covers: `horizon + 1`, or up to the
/// last simulated step for unbounded runs.
pub fn series_len(trace: &Trace) -> usize {
    let end = if trace.horizon() >= UNBOUNDED_HORIZON {
        trace.meta.last_step
    } else {
        trace.horizon()
    };
    end as usize + 1
}

fn campaigns(trace: &Trace) -> &'static [Campaign] {
    if trace.model().is_competitive() {
        &Campaign::BOTH
    } else {
        &Campaign::BOTH[..1]
    }
}

/// Active-node count per step, one series per campaign in play.
pub fn spread_series(trace: &Trace) -> Vec<MetricSeries> {
    let len = series_len(trace);
    campaigns(trace)
        .iter()
        .map(|&c| {
            let values = (0..len)
                .map(|t| trace.active_count(t as Step, c) as f64)
                .collect();
            MetricSeries::new("spread", Some(c), values)
        })
        .collect()
}

/// Quiescent-node count per step, one series per campaign in play.
pub fn quiescent_series(trace: &Trace) -> Vec<MetricSeries> {
    let len = series_len(trace);
    campaigns(trace)
        .iter()
        .map(|&c| {
            let values = (0..len)
                .map(|t| trace.counts_at(t as Step).quiescent[c.index()] as f64)
                .collect();
            MetricSeries::new("quiescent", Some(c), values)
        })
        .collect()
}

/// Splits the active nodes of a non-competitive trace into stressed ones
/// (with at least one active distrusted in-neighbor) and unstressed ones.
pub fn stressed_split(trace: &Trace, g: &DiffusionGraph) -> Result<(MetricSeries, MetricSeries)> {
    if trace.model() != Model::Nc {
        return Err(Error::TraceKind("stressed users need a non-competitive trace".into()));
    }
    check_graph(trace, g)?;
    let net = g.network();
    let len = series_len(trace);
    let mut stressed = Vec::with_capacity(len);
    let mut unstressed = Vec::with_capacity(len);
    let mut replay = trace.replay();
    while let Some((t, statuses)) = replay.advance() {
        if t as usize >= len {
            break;
        }
        let active = |v: u32| statuses[v as usize].active_campaign().is_some();
        let (mut s, mut u) = (0u32, 0u32);
        for v in net.nodes().filter(|&v| active(v)) {
            if net.distrusted_in(v).iter().any(|&e| active(net.edge(e as usize).src)) {
                s += 1;
            } else {
                u += 1;
            }
        }
        stressed.push(s as f64);
        unstressed.push(u as f64);
    }
    Ok((
        MetricSeries::new("stressed", Some(Campaign::A), stressed),
        MetricSeries::new("unstressed", Some(Campaign::A), unstressed),
    ))
}

fn check_graph(trace: &Trace, g: &DiffusionGraph) -> Result<()> {
    if trace.meta.graph_fingerprint != g.fingerprint() || trace.meta.node_count != g.node_count() {
        return Err(Error::Unpaired("trace was produced on a different graph".into()));
    }
    Ok(())
}

/// Percentage of activations lost per step when quiescence grows with foes.
///
/// `base` must be the `lambda = 0` twin of `quiesced`: same graph, node
/// parameters and seeds. Steps where the base has no active node give 0.
pub fn activation_loss(base: &Trace, quiesced: &Trace) -> Result<MetricSeries> {
    let (a, b) = (&base.meta, &quiesced.meta);
    if a.model != Model::Nc || b.model != Model::Nc {
        return Err(Error::TraceKind("activation loss needs non-competitive traces".into()));
    }
    if a.params.lambda != 0.0 {
        return Err(Error::Unpaired("base run must have lambda = 0".into()));
    }
    if a.graph_fingerprint != b.graph_fingerprint
        || a.node_params_fingerprint != b.node_params_fingerprint
        || a.seeds_a != b.seeds_a
        || a.node_count != b.node_count
    {
        return Err(Error::Unpaired(
            "runs differ in graph, node parameters or seeds".into(),
        ));
    }
    let values = (0..series_len(base))
        .map(|t| {
            let t = t as Step;
            let sb = base.active_count(t, Campaign::A) as f64;
            let sq = quiesced.active_count(t, Campaign::A) as f64;
            if sb == 0.0 {
                0.0
            } else {
                100.0 * (sb - sq) / sb
            }
        })
        .collect();
    Ok(MetricSeries::new("activation_loss", Some(Campaign::A), values))
}

/// Distinct nodes involved and total count of one kind of transition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionCounts {
    pub unique: u32,
    pub total: u32,
}

/// Per-campaign counts, keyed by the campaign a node left.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerCampaign<T> {
    #[serde(rename = "A")]
    pub a: T,
    #[serde(rename = "B")]
    pub b: T,
}

impl<T> PerCampaign<T> {
    pub fn get(&self, c: Campaign) -> &T {
        match c {
            Campaign::A => &self.a,
            Campaign::B => &self.b,
        }
    }

    pub fn get_mut(&mut self, c: Campaign) -> &mut T {
        match c {
            Campaign::A => &mut self.a,
            Campaign::B => &mut self.b,
        }
    }
}

fn left_campaign(kind: EventKind, campaign: Campaign) -> Campaign {
    match kind {
        EventKind::Switch => campaign.other(),
        _ => campaign,
    }
}

fn transition_counts(trace: &Trace, kind: EventKind) -> PerCampaign<TransitionCounts> {
    let n = trace.meta.node_count;
    let mut seen = [vec![false; n], vec![false; n]];
    let mut out = PerCampaign::<TransitionCounts>::default();
    for e in trace.events().iter().filter(|e| e.kind == kind) {
        let from = left_campaign(kind, e.campaign);
        let counts = out.get_mut(from);
        counts.total += 1;
        let flag = &mut seen[from.index()][e.node as usize];
        if !*flag {
            *flag = true;
            counts.unique += 1;
        }
    }
    out
}

/// Running total of `kind` transitions per step, keyed by the campaign left.
pub fn cumulative_transitions(trace: &Trace, kind: EventKind) -> Vec<MetricSeries> {
    let name = match kind {
        EventKind::Switch => "switches",
        EventKind::Deactivate => "deactivations",
        EventKind::Activate => "activations",
        EventKind::Quiesce => "quiescences",
    };
    let len = series_len(trace);
    let mut per_step = [vec![0.0; len], vec![0.0; len]];
    for e in trace.events().iter().filter(|e| e.kind == kind) {
        if (e.step as usize) < len {
            per_step[left_campaign(kind, e.campaign).index()][e.step as usize] += 1.0;
        }
    }
    campaigns(trace)
        .iter()
        .map(|&c| {
            let mut total = 0.0;
            let values = per_step[c.index()]
                .iter()
                .map(|x| {
                    total += x;
                    total
                })
                .collect();
            MetricSeries::new(name, Some(c), values)
        })
        .collect()
}

/// Switches away from each campaign: `a` counts A to B, `b` counts B to A.
pub fn switch_stats(trace: &Trace) -> Result<PerCampaign<TransitionCounts>> {
    if !trace.model().is_competitive() {
        return Err(Error::TraceKind("switches need a competitive trace".into()));
    }
    Ok(transition_counts(trace, EventKind::Switch))
}

/// Deactivations per campaign left.
pub fn deactivation_stats(trace: &Trace) -> Result<PerCampaign<TransitionCounts>> {
    if trace.model() != Model::Np {
        return Err(Error::TraceKind("deactivations need a non-progressive trace".into()));
    }
    Ok(transition_counts(trace, EventKind::Deactivate))
}

/// Overlap of two independent non-competitive spreads on the same graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SharedStats {
    #[serde(rename = "spread_A")]
    pub spread_a: u32,
    #[serde(rename = "spread_B")]
    pub spread_b: u32,
    /// Share of A's final spread also reached by B.
    pub shared_fraction: f64,
    /// Share of shared users reached by A no later than by B.
    #[serde(rename = "pct_A_first")]
    pub pct_a_first: f64,
    /// Mean step at which shared users were first reached by either.
    pub avg_time_any: f64,
    #[serde(rename = "avg_time_A_first")]
    pub avg_time_a_first: f64,
    #[serde(rename = "avg_time_B_first")]
    pub avg_time_b_first: f64,
}

pub fn shared_spread_stats(trace_a: &Trace, trace_b: &Trace) -> Result<SharedStats> {
    if trace_a.model() != Model::Nc || trace_b.model() != Model::Nc {
        return Err(Error::TraceKind("shared spread needs non-competitive traces".into()));
    }
    if trace_a.meta.graph_fingerprint != trace_b.meta.graph_fingerprint
        || trace_a.meta.node_count != trace_b.meta.node_count
    {
        return Err(Error::Unpaired("traces come from different graphs".into()));
    }
    let final_a = trace_a.final_statuses();
    let final_b = trace_b.final_statuses();
    let time_a = trace_a.first_activation();
    let time_b = trace_b.first_activation();
    let is_active = |s: &Status| s.active_campaign().is_some();

    let mut stats = SharedStats {
        spread_a: final_a.iter().filter(|s| is_active(s)).count() as u32,
        spread_b: final_b.iter().filter(|s| is_active(s)).count() as u32,
        ..Default::default()
    };
    let (mut shared, mut a_first) = (0u32, 0u32);
    let (mut sum_any, mut sum_a, mut sum_b) = (0.0, 0.0, 0.0);
    for v in 0..final_a.len() {
        if !(is_active(&final_a[v]) && is_active(&final_b[v])) {
            continue;
        }
        let (Some(ta), Some(tb)) = (time_a[v], time_b[v]) else {
            continue;
        };
        shared += 1;
        sum_any += ta.min(tb) as f64;
        if ta <= tb {
            a_first += 1;
            sum_a += ta as f64;
        } else {
            sum_b += tb as f64;
        }
    }
    let mean = |sum: f64, n: u32| if n == 0 { 0.0 } else { sum / n as f64 };
    stats.shared_fraction = mean(shared as f64, stats.spread_a);
    stats.pct_a_first = mean(a_first as f64, shared);
    stats.avg_time_any = mean(sum_any, shared);
    stats.avg_time_a_first = mean(sum_a, a_first);
    stats.avg_time_b_first = mean(sum_b, shared - a_first);
    Ok(stats)
}

/// Mean, population standard deviation and range of a set of run values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: u64,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// Streaming accumulator behind [`Summary`].
#[derive(Debug, Clone, Copy)]
pub struct Accumulator {
    count: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Default for Accumulator {
    fn default() -> Self {
        Accumulator {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    /// `None` when nothing was pushed.
    pub fn finish(&self) -> Option<Summary> {
        (self.count > 0).then(|| Summary {
            count: self.count,
            mean: self.mean,
            std: (self.m2 / self.count as f64).max(0.0).sqrt(),
            min: self.min,
            max: self.max,
        })
    }
}

/// Summarizes per-run scalar values in order.
pub fn aggregate_runs(values: &[f64]) -> Option<Summary> {
    let mut acc = Accumulator::default();
    values.iter().for_each(|&x| acc.push(x));
    acc.finish()
}

/// Per-step summaries of per-run series. Shorter series are extended with
/// their final value, since states are frozen once a run ends.
pub fn aggregate_series(runs: &[Vec<f64>]) -> Vec<Summary> {
    let len = runs.iter().map(Vec::len).max().unwrap_or(0);
    (0..len)
        .map(|t| {
            let mut acc = Accumulator::default();
            for run in runs {
                acc.push(run.get(t).or(run.last()).copied().unwrap_or(0.0));
            }
            acc.finish().expect("at least one run")
        })
        .collect()
}
