//! Top seeds of every strategy on one sampled diffusion graph.

use std::sync::Arc;

use ffdlt::experiment::run_graph;
use ffdlt::graph::{restrict_for_diffusion, synthetic, trust_fraction, ComponentMode};
use ffdlt::seeding::{select, source_weight_split, stress_triad_counts, Strategy};

fn main() -> ffdlt::error::Result<()> {
    let full = synthetic::trust_like(300, 40, 4_000, 0.25, 9);
    let net = Arc::new(restrict_for_diffusion(&full, ComponentMode::Lcc));
    let g = run_graph(&net, trust_fraction(&net)?, 42, 0)?;
    let triads = stress_triad_counts(&net);

    for strategy in Strategy::ALL {
        let ranking = select(strategy, &g, 5, false)?;
        println!("{strategy} ({} candidates)", ranking.entries.len());
        for &(v, score) in ranking.top() {
            let extra = match strategy {
                Strategy::MSources | Strategy::ISources => {
                    let (pos, neg) = source_weight_split(&g, v).unwrap_or_default();
                    format!("out-weight +{pos:.3} / -{neg:.3}")
                }
                Strategy::StressTriads => format!("{} triads", triads[v as usize]),
                _ => format!("out-degree {}", net.out_degree(v)),
            };
            println!("  node {:>5}  score {score:>8.3}  {extra}", net.label(v));
        }
    }
    Ok(())
}
