//! The four-node walkthrough: u and z push v into the bad campaign, then a
//! good campaign seeded at x pulls z away and, without progressivity, v drops
//! out entirely.

use std::sync::Arc;

use ffdlt::dynamics::{ModelParams, NodeParams};
use ffdlt::engine::{simulate, Model, Trace};
use ffdlt::graph::{DiffusionGraph, Edge, Sign, TrustNetwork};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 4] = ["u", "z", "v", "x"];

fn show(title: &str, trace: &Trace) {
    println!("{title}");
    let mut replay = trace.replay();
    while let Some((t, statuses)) = replay.advance() {
        let row: Vec<String> = statuses.iter().zip(NAMES).map(|(s, n)| format!("{n}={s:?}")).collect();
        println!("  t={t}: {}", row.join(" "));
    }
    for e in trace.events() {
        println!("  event {} {} {} {}", e.step, NAMES[e.node as usize], e.kind.as_str(), e.campaign);
    }
}

fn main() -> ffdlt::error::Result<()> {
    let edge = |src, dst| Edge { src, dst, sign: Sign::Trust, timestamp: None };
    // sorted by (src, dst): u->v, z->v, x->z
    let net = Arc::new(TrustNetwork::new(4, [edge(0, 2), edge(1, 2), edge(3, 1)])?);
    let g = DiffusionGraph::with_weights(net, vec![0.3, 0.5, 1.0])?;
    let mut np = NodeParams::uniform(4, 0.6, 0.0)?;
    np.set_theta(0, 1.0)?;
    np.set_theta(3, 1.0)?;
    let mp = ModelParams::new(0.0, 0.0, 4)?;

    for (model, a, b) in [(Model::Nc, vec![0, 1], vec![]), (Model::Sp, vec![3], vec![0, 1]), (Model::Np, vec![3], vec![0, 1])] {
        // in the competitive runs the good campaign is A at x
        let trace = simulate(model, &g, &a, &b, 0, &np, &mp, &mut ChaCha8Rng::seed_from_u64(0))?;
        show(&format!("{model}: A = {:?}, B = {:?}", names(&a), names(&b)), &trace);
    }
    Ok(())
}

fn names(ids: &[u32]) -> Vec<&str> {
    ids.iter().map(|&v| NAMES[v as usize]).collect()
}
