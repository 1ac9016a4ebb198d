//! Signed trust networks and the weighted diffusion graphs built on top of them.
//!
//! A [`TrustNetwork`] is the raw dataset: a simple directed graph whose edges
//! carry a trust (`+`) or distrust (`-`) sign and, for some datasets, a
//! timestamp. Edge `(u, v)` means that `v` trusts or distrusts its
//! in-neighbor `u`. A [`DiffusionGraph`] attaches one sampled influence weight
//! to every edge.

mod parse;
mod scc;
pub mod synthetic;
mod weights;

use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parse::{parse_edge_list, read_edge_list, sniff_format, write_edge_list, EdgeFormat};
pub use scc::{largest_scc, strongly_connected_components};
pub use weights::{sample_weights, WEIGHT_SUM_TOLERANCE};

/// Dense node index, `0..node_count`.
pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Trust,
    Distrust,
}

impl Sign {
    pub fn is_trust(self) -> bool {
        self == Sign::Trust
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Trust => 1,
            Sign::Distrust => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub sign: Sign,
    pub timestamp: Option<i64>,
}

/// Which part of the network the diffusion runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentMode {
    /// The whole network.
    Full,
    /// The largest strongly connected component plus its zero-in-degree
    /// in-frontier.
    Lcc,
}

/// A raw edge contribution before parallel edges are collapsed. `sign` may be
/// zero (e.g. a zero-weight KONECT record).
#[derive(Debug, Clone, Copy)]
pub(crate) struct RawEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub sign: i64,
    pub timestamp: Option<i64>,
}

/// Directed signed graph with sign-split adjacency indexes.
///
/// Edges are stored sorted by `(src, dst)`, so the out-edges of a node form a
/// contiguous range of edge indices. In-edges are indexed separately, trusted
/// ones first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrustNetwork {
    node_count: usize,
    labels: Vec<u64>,
    edges: Vec<Edge>,
    out_start: Vec<usize>,
    in_start: Vec<usize>,
    in_split: Vec<usize>,
    in_index: Vec<u32>,
}

impl TrustNetwork {
    /// Builds a network over `node_count` nodes labelled `0..node_count`.
    ///
    /// Self-loops are dropped. Parallel edges collapse to the sign of their
    /// summed signs (dropped when the sum is zero) and the earliest timestamp.
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let labels = (0..node_count as u64).collect();
        Self::with_labels(labels, edges)
    }

    /// Like [`TrustNetwork::new`], with `labels[v]` the dataset id of node `v`.
    pub fn with_labels(labels: Vec<u64>, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let raw = edges
            .into_iter()
            .map(|e| RawEdge {
                src: e.src,
                dst: e.dst,
                sign: e.sign.as_i8() as i64,
                timestamp: e.timestamp,
            })
            .collect();
        Self::assemble(labels, raw)
    }

    pub(crate) fn assemble(labels: Vec<u64>, mut raw: Vec<RawEdge>) -> Result<Self> {
        let node_count = labels.len();
        for e in &raw {
            for node in [e.src, e.dst] {
                if node as usize >= node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
        }
        raw.retain(|e| e.src != e.dst);
        raw.sort_by_key(|e| (e.src, e.dst));

        let mut edges = Vec::with_capacity(raw.len());
        for group in raw.chunk_by(|a, b| (a.src, a.dst) == (b.src, b.dst)) {
            let sum: i64 = group.iter().map(|e| e.sign).sum();
            if sum == 0 {
                continue;
            }
            let timestamp = group.iter().filter_map(|e| e.timestamp).min();
            edges.push(Edge {
                src: group[0].src,
                dst: group[0].dst,
                sign: if sum > 0 { Sign::Trust } else { Sign::Distrust },
                timestamp,
            });
        }
        Ok(Self::from_sorted(labels, edges))
    }

    /// `edges` must be sorted by `(src, dst)` without duplicates or self-loops.
    fn from_sorted(labels: Vec<u64>, edges: Vec<Edge>) -> Self {
        let n = labels.len();
        let mut out_start = vec![0usize; n + 1];
        let mut pos_in = vec![0usize; n];
        let mut neg_in = vec![0usize; n];
        for e in &edges {
            out_start[e.src as usize + 1] += 1;
            match e.sign {
                Sign::Trust => pos_in[e.dst as usize] += 1,
                Sign::Distrust => neg_in[e.dst as usize] += 1,
            }
        }
        for v in 0..n {
            out_start[v + 1] += out_start[v];
        }

        let mut in_start = vec![0usize; n + 1];
        let mut in_split = vec![0usize; n];
        for v in 0..n {
            in_split[v] = in_start[v] + pos_in[v];
            in_start[v + 1] = in_split[v] + neg_in[v];
        }
        let mut cursor_pos = in_start[..n].to_vec();
        let mut cursor_neg = in_split.clone();
        let mut in_index = vec![0u32; edges.len()];
        for (idx, e) in edges.iter().enumerate() {
            let v = e.dst as usize;
            let slot = match e.sign {
                Sign::Trust => &mut cursor_pos[v],
                Sign::Distrust => &mut cursor_neg[v],
            };
            in_index[*slot] = idx as u32;
            *slot += 1;
        }

        TrustNetwork {
            node_count: n,
            labels,
            edges,
            out_start,
            in_start,
            in_split,
            in_index,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    /// Dataset ids, indexed by dense node id.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> u64 {
        self.labels[v as usize]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.node_count as NodeId
    }

    /// Indices of the out-edges of `v`, ordered by destination.
    pub fn out_edges(&self, v: NodeId) -> Range<usize> {
        self.out_start[v as usize]..self.out_start[v as usize + 1]
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_edges(v).len()
    }

    /// Edge indices of all in-edges of `v`, trusted first.
    pub fn in_edges(&self, v: NodeId) -> &[u32] {
        &self.in_index[self.in_start[v as usize]..self.in_start[v as usize + 1]]
    }

    /// Edge indices of the in-edges from friends of `v`.
    pub fn trusted_in(&self, v: NodeId) -> &[u32] {
        &self.in_index[self.in_start[v as usize]..self.in_split[v as usize]]
    }

    /// Edge indices of the in-edges from foes of `v`.
    pub fn distrusted_in(&self, v: NodeId) -> &[u32] {
        &self.in_index[self.in_split[v as usize]..self.in_start[v as usize + 1]]
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_edges(v).len()
    }

    pub fn find_edge(&self, src: NodeId, dst: NodeId) -> Option<usize> {
        let range = self.out_edges(src);
        let start = range.start;
        self.edges[range]
            .binary_search_by_key(&dst, |e| e.dst)
            .ok()
            .map(|i| start + i)
    }

    pub fn negative_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.sign == Sign::Distrust).count()
    }

    /// True when every edge carries a timestamp.
    pub fn is_timestamped(&self) -> bool {
        self.edges.iter().all(|e| e.timestamp.is_some())
    }

    /// Subgraph induced by `nodes`, relabelled densely in ascending order of
    /// the given ids. Dataset labels are carried over.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> TrustNetwork {
        let mut keep: Vec<NodeId> = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut remap = vec![u32::MAX; self.node_count];
        for (new, &old) in keep.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let labels = keep.iter().map(|&v| self.labels[v as usize]).collect();
        let mut edges = Vec::new();
        for &old in &keep {
            for e in &self.edges[self.out_edges(old)] {
                let dst = remap[e.dst as usize];
                if dst != u32::MAX {
                    edges.push(Edge {
                        src: remap[old as usize],
                        dst,
                        ..*e
                    });
                }
            }
        }
        // `keep` is ascending and out-edges are ordered by dst, so `edges`
        // stays sorted by (src, dst).
        TrustNetwork::from_sorted(labels, edges)
    }
}

/// Fraction of trust edges.
pub fn trust_fraction(net: &TrustNetwork) -> Result<f64> {
    if net.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let negative = net.negative_edge_count();
    Ok((net.edge_count() - negative) as f64 / net.edge_count() as f64)
}

/// Restricts the network to the part the diffusion runs on.
///
/// In [`ComponentMode::Lcc`] the result is induced by the largest strongly
/// connected component together with every zero-in-degree node that has an
/// out-edge into it. Exogenous sources cannot live inside a strongly connected
/// component, so the frontier keeps source-based seed strategies usable.
pub fn restrict_for_diffusion(net: &TrustNetwork, mode: ComponentMode) -> TrustNetwork {
    match mode {
        ComponentMode::Full => net.clone(),
        ComponentMode::Lcc => {
            if net.node_count() == 0 {
                return net.clone();
            }
            let lcc = largest_scc(net);
            let mut in_lcc = vec![false; net.node_count()];
            for &v in &lcc {
                in_lcc[v as usize] = true;
            }
            let mut keep = lcc;
            for v in net.nodes() {
                if in_lcc[v as usize] || net.in_degree(v) != 0 {
                    continue;
                }
                if net.out_edges(v).any(|e| in_lcc[net.edge(e).dst as usize]) {
                    keep.push(v);
                }
            }
            net.induced_subgraph(&keep)
        }
    }
}

/// A trust network with one influence weight per edge.
///
/// Weights agree in sign with their edge (zero is allowed and means no
/// influence), and for every node the trusted in-weights and the absolute
/// distrusted in-weights each sum to at most one.
#[derive(Debug, Clone)]
pub struct DiffusionGraph {
    network: Arc<TrustNetwork>,
    weights: Vec<f64>,
    fingerprint: u64,
}

impl DiffusionGraph {
    /// Validates and wraps explicit weights, indexed like `network.edges()`.
    pub fn with_weights(network: Arc<TrustNetwork>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != network.edge_count() {
            return Err(Error::InvalidWeights(format!(
                "{} weights for {} edges",
                weights.len(),
                network.edge_count()
            )));
        }
        for (idx, (e, &w)) in network.edges().iter().zip(&weights).enumerate() {
            let ok = match e.sign {
                Sign::Trust => (0.0..=1.0).contains(&w),
                Sign::Distrust => (-1.0..=0.0).contains(&w),
            };
            if !ok {
                return Err(Error::InvalidWeights(format!(
                    "edge {idx} ({} -> {}) has weight {w} inconsistent with its sign",
                    e.src, e.dst
                )));
            }
        }
        for v in network.nodes() {
            let pos: f64 = network.trusted_in(v).iter().map(|&e| weights[e as usize]).sum();
            let neg: f64 = network
                .distrusted_in(v)
                .iter()
                .map(|&e| -weights[e as usize])
                .sum();
            if pos > 1.0 + WEIGHT_SUM_TOLERANCE || neg > 1.0 + WEIGHT_SUM_TOLERANCE {
                return Err(Error::InvalidWeights(format!(
                    "node {v}: trusted in-weight {pos}, distrusted in-weight {neg}"
                )));
            }
        }
        let structure = network
            .edges()
            .iter()
            .map(|e| (e.src as u64) << 33 | (e.dst as u64) << 1 | e.sign.is_trust() as u64);
        let fingerprint = fnv1a(
            std::iter::once(network.node_count() as u64)
                .chain(structure)
                .chain(weights.iter().map(|w| w.to_bits())),
        );
        Ok(DiffusionGraph {
            network,
            weights,
            fingerprint,
        })
    }

    pub fn network(&self) -> &TrustNetwork {
        &self.network
    }

    pub fn shared_network(&self) -> &Arc<TrustNetwork> {
        &self.network
    }

    pub fn node_count(&self) -> usize {
        self.network.node_count()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, edge: usize) -> f64 {
        self.weights[edge]
    }

    /// Hash of the weight vector; identifies a sampling.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }
}

pub(crate) fn fnv1a(words: impl IntoIterator<Item = u64>) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for word in words {
        for byte in word.to_le_bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    hash
}
