//! Writes an event trace to a file, reads it back and replays it step by step.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::sync::Arc;

use ffdlt::dynamics::{ModelParams, NodeParams};
use ffdlt::engine::{run_nonprogressive, Campaign, Trace};
use ffdlt::graph::{sample_weights, synthetic};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ffdlt::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let net = Arc::new(synthetic::random_signed(200, 1_500, 0.25, 8));
    let g = sample_weights(net, 0.75, &mut rng)?;
    let np = NodeParams::sample(200, 5.0, &mut rng);
    let mp = ModelParams::new(0.1, 0.0, 30)?;
    let trace = run_nonprogressive(&g, &[0, 1, 2, 3, 4], &[10, 11, 12, 13, 14], 5, &np, &mp, &mut rng)?;

    let path = std::env::temp_dir().join("ffdlt_example.trace");
    trace.write(BufWriter::new(File::create(&path).map_err(|e| ffdlt::error::Error::io(&path, e))?))?;
    let back = Trace::read(BufReader::new(File::open(&path).map_err(|e| ffdlt::error::Error::io(&path, e))?))?;
    assert_eq!(back, trace);
    println!("{} events written to {}", back.events().len(), path.display());

    let mut replay = back.replay();
    while let Some((t, _)) = replay.advance() {
        let c = back.counts_at(t);
        println!(
            "t={t:>2}  A {:>3} (+{} quiescent)  B {:>3} (+{} quiescent)",
            c.active[Campaign::A.index()],
            c.quiescent[Campaign::A.index()],
            c.active[Campaign::B.index()],
            c.quiescent[Campaign::B.index()]
        );
    }
    Ok(())
}
