//! Runs the same configured experiment with 1 and 4 workers and checks that
//! every output file comes out byte-identical.

use std::fs;

use ffdlt::experiment::{run_experiment, ExperimentConfig};
use ffdlt::graph::{synthetic, write_edge_list, EdgeFormat};

fn main() -> ffdlt::error::Result<()> {
    let dir = std::env::temp_dir().join("ffdlt_batch");
    fs::create_dir_all(&dir).map_err(|e| ffdlt::error::Error::io(&dir, e))?;
    let data = dir.join("net.txt");
    let mut text = Vec::new();
    write_edge_list(&synthetic::trust_like(500, 50, 7_000, 0.2, 4), &mut text, EdgeFormat::SnapSigned)?;
    fs::write(&data, text).map_err(|e| ffdlt::error::Error::io(&data, e))?;

    let mut outputs = Vec::new();
    for workers in [1, 4] {
        let out = dir.join(format!("out_{workers}"));
        let cfg = ExperimentConfig::parse(&format!(
            "dataset = {}\nmodel = np\nstrategy = st\nstrategy_b = is\nk = 20\ndelta = 0.1\n\
             delay_fraction = 0.25\nruns = 40\nmaster_seed = 7\noutput = {}\n",
            data.display(),
            out.display()
        ))?;
        let summary = run_experiment(&cfg, workers)?;
        println!("{workers} worker(s): {} runs, mean horizon {:.2}", summary.runs, summary.horizon.mean);
        outputs.push(out);
    }
    for file in ["runs.csv", "summary.json", "seeds.csv"] {
        let same = fs::read(outputs[0].join(file)).ok() == fs::read(outputs[1].join(file)).ok();
        println!("{file:<13} {}", if same { "identical" } else { "DIFFERENT" });
    }
    Ok(())
}
