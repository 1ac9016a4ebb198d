//! Node, edge and component counts of an edge-list file.
//!
//! Usage: `cargo run --release --example dataset_stats -- <file> [snap|konect]`
//! Without a file a synthetic network is described.

use std::path::PathBuf;

use ffdlt::experiment::dataset_stats;
use ffdlt::graph::{read_edge_list, synthetic, EdgeFormat};

fn main() -> ffdlt::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let net = match args.next() {
        Some(path) => {
            let format = args.next().map(|f| f.parse::<EdgeFormat>()).transpose()?;
            read_edge_list(&PathBuf::from(path), format)?
        }
        None => synthetic::trust_like(2_000, 300, 30_000, 0.2, 0),
    };
    print!("{}", dataset_stats(&net));
    Ok(())
}
