use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use ffdlt::error::{Error, Result};
use ffdlt::experiment::{
    dataset_stats, default_mode, run_experiment, run_graph, workers_from_env, ExperimentConfig, WORKERS_ENV,
};
use ffdlt::graph::{read_edge_list, restrict_for_diffusion, trust_fraction, ComponentMode, EdgeFormat};
use ffdlt::seeding::{select, Strategy};

#[derive(Parser)]
#[command(name = "ffdlt", version, about = "Friend-foe threshold diffusion on signed networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment; any config key can be overridden as `--key value`.
    #[command(after_help = format!("Worker threads are read from {WORKERS_ENV}."))]
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
        overrides: Vec<String>,
    },
    /// Print a seed ranking as `rank,node,score`.
    Seeds {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        strategy: String,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        format: Option<EdgeFormat>,
        #[arg(long)]
        mode: Option<String>,
        /// Seed of the weight sampling used by M-Sources and I-Sources.
        #[arg(long, default_value_t = 0)]
        master_seed: u64,
        #[arg(long)]
        newcomer_inverted: bool,
    },
    /// Print node, edge and component counts of a dataset.
    Stats {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        format: Option<EdgeFormat>,
        #[arg(long)]
        json: bool,
    },
}

fn pair_overrides(args: &[String]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(key) = it.next() {
        let Some(name) = key.strip_prefix("--") else {
            return Err(Error::Config(format!("expected --key before '{key}'")));
        };
        if let Some((k, v)) = name.split_once('=') {
            out.push((k.to_string(), v.to_string()));
            continue;
        }
        let value = it
            .next()
            .ok_or_else(|| Error::Config(format!("missing value for --{name}")))?;
        out.push((name.to_string(), value.clone()));
    }
    Ok(out)
}

fn mode_arg(mode: Option<&str>, dataset: &std::path::Path) -> Result<ComponentMode> {
    match mode {
        None => Ok(default_mode(dataset)),
        Some("full") => Ok(ComponentMode::Full),
        Some("lcc") => Ok(ComponentMode::Lcc),
        Some(other) => Err(Error::Config(format!("mode '{other}' must be full or lcc"))),
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, overrides } => {
            let cfg = ExperimentConfig::load(&config, &pair_overrides(&overrides)?)?;
            let workers = workers_from_env();
            log::info!("{} runs on {} workers", cfg.runs, workers);
            let summary = run_experiment(&cfg, workers)?;
            println!(
                "{} runs written to {} (mean horizon {:.2})",
                summary.runs,
                cfg.output.display(),
                summary.horizon.mean
            );
        }
        Command::Seeds {
            dataset,
            strategy,
            k,
            format,
            mode,
            master_seed,
            newcomer_inverted,
        } => {
            let strategy: Strategy = strategy.parse()?;
            let full = read_edge_list(&dataset, format)?;
            let net = Arc::new(restrict_for_diffusion(&full, mode_arg(mode.as_deref(), &dataset)?));
            let g = run_graph(&net, trust_fraction(&net)?, master_seed, 0)?;
            let ranking = select(strategy, &g, k, newcomer_inverted)?;
            if ranking.shortfall() {
                log::warn!("only {} candidates for k = {}", ranking.entries.len(), k);
            }
            let stdout = std::io::stdout();
            ranking
                .write_csv(&net, stdout.lock())
                .map_err(|e| Error::io("<stdout>", e))?;
        }
        Command::Stats {
            dataset,
            format,
            json,
        } => {
            let net = read_edge_list(&dataset, format)?;
            let stats = dataset_stats(&net);
            let mut out = std::io::stdout().lock();
            let io = |e| Error::io("<stdout>", e);
            if json {
                serde_json::to_writer_pretty(&mut out, &stats)?;
                writeln!(out).map_err(io)?;
            } else {
                writeln!(out, "{}", dataset.display()).map_err(io)?;
                write!(out, "{stats}").map_err(io)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
