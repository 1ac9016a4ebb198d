//! Single-campaign spread on a synthetic trust network, split into stressed
//! users (with an active foe) and unstressed ones.
//!
//! Usage: `cargo run --release --example noncompetitive_spread [runs]`

use ffdlt::engine::Campaign;
use ffdlt::experiment::{summarize, Experiment, ExperimentConfig};
use ffdlt::graph::synthetic;
use ffdlt::seeding::Strategy;

fn main() -> ffdlt::error::Result<()> {
    let runs: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let net = synthetic::trust_like(1_000, 100, 20_000, 0.2, 1);
    println!("{:<14} {:>8} {:>9} {:>11} {:>8}", "strategy", "spread", "stressed", "unstressed", "horizon");
    for strategy in Strategy::ALL {
        let cfg = ExperimentConfig::parse(&format!(
            "dataset = synthetic\nmodel = nc\nstrategy = {strategy}\nk = 50\nruns = {runs}\nmaster_seed = 5\n"
        ))?;
        let exp = Experiment::from_network(cfg, &net)?;
        let summary = summarize(exp.config.model, &exp.execute(4)?)?;
        let last = |m: &str| summary.mean_series(m, Campaign::A).and_then(|s| s.last().copied()).unwrap_or(0.0);
        println!(
            "{:<14} {:>8.1} {:>9.1} {:>11.1} {:>8.1}",
            strategy.as_str(),
            last("spread"),
            last("stressed"),
            last("unstressed"),
            summary.horizon.mean
        );
    }
    Ok(())
}
