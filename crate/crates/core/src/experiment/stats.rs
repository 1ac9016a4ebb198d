use std::fmt;

use serde::Serialize;

use crate::graph::{largest_scc, restrict_for_diffusion, ComponentMode, TrustNetwork};

/// Size summary of a signed network and of its diffusion context.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DatasetStats {
    pub nodes: usize,
    pub edges: usize,
    pub negative_edges: usize,
    pub negative_fraction: f64,
    pub timestamped: bool,
    /// Largest strongly connected component and its induced edges.
    pub lcc_nodes: usize,
    pub lcc_edges: usize,
    /// The component plus its zero-in-degree in-frontier.
    pub restricted_nodes: usize,
    pub restricted_edges: usize,
}

pub fn dataset_stats(net: &TrustNetwork) -> DatasetStats {
    let lcc = if net.node_count() == 0 {
        TrustNetwork::new(0, []).expect("empty network")
    } else {
        net.induced_subgraph(&largest_scc(net))
    };
    let restricted = restrict_for_diffusion(net, ComponentMode::Lcc);
    let negative = net.negative_edge_count();
    DatasetStats {
        nodes: net.node_count(),
        edges: net.edge_count(),
        negative_edges: negative,
        negative_fraction: if net.edge_count() == 0 {
            0.0
        } else {
            negative as f64 / net.edge_count() as f64
        },
        timestamped: net.is_timestamped(),
        lcc_nodes: lcc.node_count(),
        lcc_edges: lcc.edge_count(),
        restricted_nodes: restricted.node_count(),
        restricted_edges: restricted.edge_count(),
    }
}

impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes              {}", self.nodes)?;
        writeln!(f, "edges              {}", self.edges)?;
        writeln!(
            f,
            "negative edges     {} ({:.1}%)",
            self.negative_edges,
            100.0 * self.negative_fraction
        )?;
        writeln!(f, "timestamped        {}", self.timestamped)?;
        writeln!(f, "strong LCC nodes   {}", self.lcc_nodes)?;
        writeln!(f, "strong LCC edges   {}", self.lcc_edges)?;
        writeln!(f, "with in-frontier   {} nodes, {} edges", self.restricted_nodes, self.restricted_edges)
    }
}
