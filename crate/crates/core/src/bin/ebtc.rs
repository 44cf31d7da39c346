use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use subgraph_ebtc::experiments::{self, Method};
use subgraph_ebtc::{Error, KrylovParams};

#[derive(Parser)]
#[command(name = "ebtc", version, about = "Sub-graph identification by summed total communicability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random background graph as an edge list
    Generate {
        /// er, ba or sw
        #[arg(long)]
        model: String,
        #[arg(long)]
        nodes: usize,
        /// Expected mean degree (er)
        #[arg(long)]
        avg_degree: Option<f64>,
        /// Edges per new node (ba)
        #[arg(long)]
        m: Option<usize>,
        /// Ring degree, even (sw)
        #[arg(long)]
        k: Option<usize>,
        /// Rewiring probability (sw, default 0.1)
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score every node of an edge-list graph by total communicability
    Ebtc {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = KrylovParams::default().m)]
        krylov_m: usize,
        #[arg(long, default_value_t = KrylovParams::default().tol)]
        tol: f64,
        #[arg(long, default_value_t = KrylovParams::default().max_restarts)]
        max_restarts: usize,
        /// Rank whose score is reported as the selection threshold
        #[arg(long, default_value_t = 20)]
        top: usize,
    },
    /// Run a Monte Carlo identification experiment from a config file
    Experiment {
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        /// Override the config's run count
        #[arg(long)]
        runs: Option<usize>,
    },
    /// Run the modularity-matrix baseline from a config file
    Baseline {
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        /// Override the config's run count
        #[arg(long)]
        runs: Option<usize>,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate { model, nodes, avg_degree, m, k, beta, seed, out } => {
            let spec = experiments::spec_from_flags(&model, nodes, avg_degree, m, k, beta, seed)?;
            let s = experiments::generate_to_file(&spec, &out)?;
            println!("n={} E={} density={:.6}", s.nodes, s.edges, s.density);
        }
        Command::Ebtc { graph, out, krylov_m, tol, max_restarts, top } => {
            let params = KrylovParams { m: krylov_m, tol, max_restarts };
            params.validate().map_err(|e| Error::Config(vec![e.to_string()]))?;
            let s = experiments::ebtc_to_file(&graph, &out, &params, top)?;
            println!("n={} k={} threshold={:.16e} est_error={:.3e}", s.nodes, s.k, s.threshold, s.est_error);
        }
        Command::Experiment { config, out_dir, jobs, runs } => {
            let r = experiments::run_experiment_file(&config, &out_dir, Method::Ebtc, jobs, runs)?;
            println!("{}", experiments::SUMMARY_HEADER);
            println!("{}", r.summary_row());
        }
        Command::Baseline { config, out_dir, jobs, runs } => {
            let r = experiments::run_experiment_file(&config, &out_dir, Method::Modularity, jobs, runs)?;
            println!("{}", experiments::SUMMARY_HEADER);
            println!("{}", r.summary_row());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (Error::Config(_) | Error::Param(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
