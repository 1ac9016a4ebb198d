//! Small random signed networks for examples, tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, NodeId, Sign, TrustNetwork};

/// Uniform random simple digraph with `edges` distinct edges, each negative
/// with probability `negative_fraction`, and timestamps drawn from
/// `0..10 * edges`.
pub fn random_signed(nodes: usize, edges: usize, negative_fraction: f64, seed: u64) -> TrustNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_edges = nodes.saturating_mul(nodes.saturating_sub(1));
    let target = edges.min(max_edges);
    let mut seen = std::collections::HashSet::with_capacity(target);
    let mut list = Vec::with_capacity(target);
    while list.len() < target {
        let src = rng.random_range(0..nodes) as NodeId;
        let dst = rng.random_range(0..nodes) as NodeId;
        if src == dst || !seen.insert((src, dst)) {
            continue;
        }
        list.push(random_edge(&mut rng, src, dst, negative_fraction, target));
    }
    TrustNetwork::new(nodes, list).expect("ids in range")
}

/// Heavy-tailed signed digraph with a strongly connected core of `core`
/// nodes and `sources` zero-in-degree nodes pointing into it.
///
/// Core edges attach preferentially by target in-degree, which gives the
/// skewed degree profile of trust and voting networks.
pub fn trust_like(
    core: usize,
    sources: usize,
    edges: usize,
    negative_fraction: f64,
    seed: u64,
) -> TrustNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = core + sources;
    let mut seen = std::collections::HashSet::new();
    let mut list = Vec::with_capacity(edges);
    let mut push = |rng: &mut ChaCha8Rng, list: &mut Vec<Edge>, src: NodeId, dst: NodeId| {
        if src != dst && seen.insert((src, dst)) {
            list.push(random_edge(rng, src, dst, negative_fraction, edges));
            true
        } else {
            false
        }
    };

    // Ring through a random permutation makes the core strongly connected.
    let mut order: Vec<NodeId> = (0..core as NodeId).collect();
    order.shuffle(&mut rng);
    for i in 0..core {
        push(&mut rng, &mut list, order[i], order[(i + 1) % core]);
    }
    // Each source gets a few out-edges into the core.
    for s in core..n {
        let fanout = rng.random_range(1..=8usize.min(core));
        for _ in 0..fanout {
            let dst = rng.random_range(0..core) as NodeId;
            push(&mut rng, &mut list, s as NodeId, dst);
        }
    }
    // Preferential attachment by in-degree among core nodes.
    let mut targets: Vec<NodeId> = list.iter().map(|e| e.dst).collect();
    let budget = edges.min(core * core.saturating_sub(1) + list.len());
    let mut attempts = 0usize;
    while list.len() < budget && attempts < budget * 20 {
        attempts += 1;
        let src = rng.random_range(0..core) as NodeId;
        let dst = if rng.random_bool(0.6) {
            targets[rng.random_range(0..targets.len())]
        } else {
            rng.random_range(0..core) as NodeId
        };
        if push(&mut rng, &mut list, src, dst) {
            targets.push(dst);
        }
    }
    TrustNetwork::new(n, list).expect("ids in range")
}

fn random_edge<R: Rng>(rng: &mut R, src: NodeId, dst: NodeId, negative: f64, scale: usize) -> Edge {
    Edge {
        src,
        dst,
        sign: if rng.random_bool(negative) {
            Sign::Distrust
        } else {
            Sign::Trust
        },
        timestamp: Some(rng.random_range(0..(10 * scale.max(1)) as i64)),
    }
}
