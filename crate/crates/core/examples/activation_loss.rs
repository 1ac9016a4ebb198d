//! Percentage of activations lost per step once foes slow users down
//! (`lambda = 5`), against the same runs with constant quiescence.

use ffdlt::engine::Campaign;
use ffdlt::experiment::{summarize, Experiment, ExperimentConfig};
use ffdlt::graph::synthetic;
use ffdlt::seeding::Strategy;

fn main() -> ffdlt::error::Result<()> {
    let net = synthetic::trust_like(800, 80, 14_000, 0.25, 3);
    for strategy in [Strategy::StressTriads, Strategy::ISources, Strategy::MSources] {
        let cfg = ExperimentConfig::parse(&format!(
            "dataset = synthetic\nmodel = nc\nstrategy = {strategy}\nk = 50\nlambda = 5\nruns = 100\n"
        ))?;
        let exp = Experiment::from_network(cfg, &net)?;
        let summary = summarize(exp.config.model, &exp.execute(4)?)?;
        let loss = summary.mean_series("activation_loss", Campaign::A).unwrap_or_default();
        let shown: Vec<String> = loss.iter().map(|x| format!("{x:.1}")).collect();
        println!("{strategy}: {}", shown.join(" "));
    }
    Ok(())
}
