use std::sync::Arc;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::{DiffusionGraph, Sign, TrustNetwork};
use crate::error::{Error, Result};

/// Slack allowed on the per-node cumulative weight bounds, covering the
/// rounding of up to a few thousand summed terms.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Samples one influence weight per edge.
///
/// For a trust edge `(u, v)` with `n` trusted in-neighbors of `v`, draws
/// `X ~ Binomial(n, p)` and sets `w = X / n²`; distrust edges use the
/// distrusted in-degree and a negative sign. Each weight is at most `1/n` in
/// magnitude, so both cumulative in-weight bounds hold by construction and the
/// expected trusted in-weight of a node is `p`.
pub fn sample_weights<R: Rng + ?Sized>(
    network: Arc<TrustNetwork>,
    p: f64,
    rng: &mut R,
) -> Result<DiffusionGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!(
            "success probability {p} outside [0, 1]"
        )));
    }
    let mut weights = Vec::with_capacity(network.edge_count());
    for e in network.edges() {
        let (n, sign) = match e.sign {
            Sign::Trust => (network.trusted_in(e.dst).len() as u64, 1.0),
            Sign::Distrust => (network.distrusted_in(e.dst).len() as u64, -1.0),
        };
        let draws = Binomial::new(n, p)
            .expect("n >= 1 and p in [0, 1]")
            .sample(rng);
        weights.push(sign * draws as f64 / (n * n) as f64);
    }
    DiffusionGraph::with_weights(network, weights)
}
