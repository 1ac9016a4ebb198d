//! Seed-selection strategies.
//!
//! M-Sources and I-Sources score zero-in-degree nodes by how their sampled
//! out-weights split between distrust and trust. Stress-Triads counts the
//! distrust-bypassing triads a node closes. Least-New and Most-New pick
//! high out-degree newcomers from the older or newer half of the newcomers.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DiffusionGraph, NodeId, TrustNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    MSources,
    ISources,
    StressTriads,
    LeastNew,
    MostNew,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::MSources,
        Strategy::ISources,
        Strategy::StressTriads,
        Strategy::LeastNew,
        Strategy::MostNew,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::MSources => "m-sources",
            Strategy::ISources => "i-sources",
            Strategy::StressTriads => "stress-triads",
            Strategy::LeastNew => "least-new",
            Strategy::MostNew => "most-new",
        }
    }

    /// Whether the ranking depends on sampled weights and so changes per run.
    pub fn uses_weights(self) -> bool {
        matches!(self, Strategy::MSources | Strategy::ISources)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        let strategy = match key.as_str() {
            "m-sources" | "ms" => Strategy::MSources,
            "i-sources" | "is" => Strategy::ISources,
            "stress-triads" | "st" => Strategy::StressTriads,
            "least-new" | "ln" => Strategy::LeastNew,
            "most-new" | "mn" => Strategy::MostNew,
            _ => {
                let names: Vec<_> = Strategy::ALL.iter().map(|s| s.as_str()).collect();
                return Err(Error::Config(format!(
                    "unknown strategy '{s}' (expected one of {})",
                    names.join(", ")
                )));
            }
        };
        Ok(strategy)
    }
}

/// Which half of the newcomers to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NewcomerBin {
    LeastNew,
    MostNew,
}

/// A complete candidate ranking, best first.
///
/// Scores are non-increasing and ties are ordered by ascending node id. All
/// candidates are kept so callers can skip nodes taken by another campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedRanking {
    pub strategy: Strategy,
    pub k: usize,
    pub entries: Vec<(NodeId, f64)>,
}

impl SeedRanking {
    fn build(strategy: Strategy, k: usize, mut entries: Vec<(NodeId, f64)>) -> Self {
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        SeedRanking {
            strategy,
            k,
            entries,
        }
    }

    /// Fewer than `k` candidates exist.
    pub fn shortfall(&self) -> bool {
        self.entries.len() < self.k
    }

    /// The top-`k` nodes.
    pub fn seeds(&self) -> Vec<NodeId> {
        self.entries.iter().take(self.k).map(|e| e.0).collect()
    }

    /// The top-`k` nodes not in `taken`.
    pub fn seeds_excluding(&self, taken: &[NodeId]) -> Vec<NodeId> {
        self.entries
            .iter()
            .map(|e| e.0)
            .filter(|v| !taken.contains(v))
            .take(self.k)
            .collect()
    }

    pub fn top(&self) -> &[(NodeId, f64)] {
        &self.entries[..self.k.min(self.entries.len())]
    }

    /// Writes `rank,node,score` rows for the top-`k`, using original ids.
    pub fn write_csv<W: Write>(&self, net: &TrustNetwork, mut out: W) -> std::io::Result<()> {
        writeln!(out, "rank,node,score")?;
        for (rank, &(v, score)) in self.top().iter().enumerate() {
            writeln!(out, "{},{},{}", rank + 1, net.label(v), score)?;
        }
        Ok(())
    }
}

/// Dispatches to the strategy; `newcomer_inverted` flips the newcomer test.
pub fn select(
    strategy: Strategy,
    g: &DiffusionGraph,
    k: usize,
    newcomer_inverted: bool,
) -> Result<SeedRanking> {
    match strategy {
        Strategy::MSources => rank_m_sources(g, k),
        Strategy::ISources => rank_i_sources(g, k),
        Strategy::StressTriads => stress_triads(g.network(), k),
        Strategy::LeastNew => newcomers(g.network(), k, NewcomerBin::LeastNew, newcomer_inverted),
        Strategy::MostNew => newcomers(g.network(), k, NewcomerBin::MostNew, newcomer_inverted),
    }
}

fn check_budget(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParams("seed budget k must be at least 1".into()));
    }
    Ok(())
}

/// Positive and absolute negative out-weight sums of a source node, or `None`
/// when `v` has in-edges, no out-edges or no out-weight at all.
pub fn source_weight_split(g: &DiffusionGraph, v: NodeId) -> Option<(f64, f64)> {
    let net = g.network();
    if net.in_degree(v) > 0 || net.out_degree(v) == 0 {
        return None;
    }
    let (mut pos, mut neg) = (0.0, 0.0);
    for e in net.out_edges(v) {
        let w = g.weight(e);
        if w > 0.0 {
            pos += w;
        } else {
            neg -= w;
        }
    }
    (pos + neg > 0.0).then_some((pos, neg))
}

fn rank_sources(g: &DiffusionGraph, k: usize, strategy: Strategy) -> Result<SeedRanking> {
    check_budget(k)?;
    let net = g.network();
    let entries = net
        .nodes()
        .filter_map(|v| {
            let (pos, neg) = source_weight_split(g, v)?;
            let share = match strategy {
                Strategy::MSources => neg,
                _ => pos,
            } / (pos + neg);
            Some((v, share * (net.out_degree(v) as f64).ln()))
        })
        .collect();
    Ok(SeedRanking::build(strategy, k, entries))
}

/// Sources ranked by distrusted share of out-weight times `ln |N_out|`.
pub fn rank_m_sources(g: &DiffusionGraph, k: usize) -> Result<SeedRanking> {
    rank_sources(g, k, Strategy::MSources)
}

/// Sources ranked by trusted share of out-weight times `ln |N_out|`.
pub fn rank_i_sources(g: &DiffusionGraph, k: usize) -> Result<SeedRanking> {
    rank_sources(g, k, Strategy::ISources)
}

/// Per-node count of triads `(z, u, v)` with `z -> v` distrust, `u -> v`
/// trust and `z -> u` trust, credited to `z`.
pub fn stress_triad_counts(net: &TrustNetwork) -> Vec<u64> {
    let mut counts = vec![0u64; net.node_count()];
    for e in net.edges() {
        if e.sign.is_trust() {
            continue;
        }
        let z = e.src;
        for &f in net.trusted_in(e.dst) {
            let u = net.edge(f as usize).src;
            if let Some(zu) = net.find_edge(z, u) {
                if net.edge(zu).sign.is_trust() {
                    counts[z as usize] += 1;
                }
            }
        }
    }
    counts
}

/// Stress-nodes ranked by triad count.
pub fn stress_triads(net: &TrustNetwork, k: usize) -> Result<SeedRanking> {
    check_budget(k)?;
    let entries = stress_triad_counts(net)
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(v, c)| (v as NodeId, c as f64))
        .collect();
    Ok(SeedRanking::build(Strategy::StressTriads, k, entries))
}

/// Start time of `v` if it is a newcomer.
///
/// A newcomer has in- and out-edges and every in-edge is older than its
/// oldest out-edge. With `inverted`, every in-edge must instead be more
/// recent than its oldest out-edge. The start time is the oldest in-edge
/// timestamp.
pub fn newcomer_start(net: &TrustNetwork, v: NodeId, inverted: bool) -> Option<i64> {
    let stamp = |e: usize| net.edge(e).timestamp.expect("timestamped network");
    let ins = net.in_edges(v);
    let outs = net.out_edges(v);
    if ins.is_empty() || outs.is_empty() {
        return None;
    }
    let in_min = ins.iter().map(|&e| stamp(e as usize)).min()?;
    let in_max = ins.iter().map(|&e| stamp(e as usize)).max()?;
    let out_min = outs.map(stamp).min()?;
    let newcomer = if inverted {
        in_min > out_min
    } else {
        in_max < out_min
    };
    newcomer.then_some(in_min)
}

/// Newcomers of one equal-frequency half ranked by out-degree.
///
/// Newcomers are ordered by start time (then id) and split in two; with an
/// odd count the older half gets the extra node.
pub fn newcomers(
    net: &TrustNetwork,
    k: usize,
    which: NewcomerBin,
    inverted: bool,
) -> Result<SeedRanking> {
    check_budget(k)?;
    if !net.is_timestamped() {
        return Err(Error::MissingTimestamps);
    }
    let mut found: Vec<(i64, NodeId)> = net
        .nodes()
        .filter_map(|v| newcomer_start(net, v, inverted).map(|s| (s, v)))
        .collect();
    found.sort_unstable();
    let older = found.len().div_ceil(2);
    let (bin, strategy) = match which {
        NewcomerBin::LeastNew => (&found[..older], Strategy::LeastNew),
        NewcomerBin::MostNew => (&found[older..], Strategy::MostNew),
    };
    let entries = bin
        .iter()
        .map(|&(_, v)| (v, net.out_degree(v) as f64))
        .collect();
    Ok(SeedRanking::build(strategy, k, entries))
}
