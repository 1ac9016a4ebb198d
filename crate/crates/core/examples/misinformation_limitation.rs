//! A bad campaign seeded by Stress-Triads against a good one seeded by
//! I-Sources, started later and later. Reports switches, deactivations and
//! the overlap of the two independent spreads.

use ffdlt::experiment::{summarize, Experiment, ExperimentConfig};
use ffdlt::graph::synthetic;

fn main() -> ffdlt::error::Result<()> {
    let net = synthetic::trust_like(1_000, 100, 18_000, 0.2, 11);
    println!("model delta delay  switches A/B   deactivations A/B  shared  A-first");
    for model in ["sp", "np"] {
        for delta in [0.0, 0.1] {
            for delay in [0.0, 0.25, 0.5, 0.75] {
                let cfg = ExperimentConfig::parse(&format!(
                    "dataset = synthetic\nmodel = {model}\nstrategy = st\nstrategy_b = is\nk = 50\n\
                     delta = {delta}\ndelay_fraction = {delay}\nruns = 50\n"
                ))?;
                let exp = Experiment::from_network(cfg, &net)?;
                let s = summarize(exp.config.model, &exp.execute(4)?)?;
                let sw = s.switch_stats.expect("competitive");
                let de = s
                    .deactivation_stats
                    .map(|d| format!("{:>7.1}/{:<7.1}", d.a.total.mean, d.b.total.mean))
                    .unwrap_or_else(|| format!("{:>15}", "-"));
                let shared = s.shared_stats.expect("competitive");
                println!(
                    "{model:<5} {delta:<5} {delay:<5} {:>6.1}/{:<6.1}  {de}    {:.2}    {:.0}%",
                    sw.a.total.mean,
                    sw.b.total.mean,
                    shared.shared_fraction.mean,
                    100.0 * shared.pct_a_first.mean
                );
            }
        }
    }
    Ok(())
}
