//! Compare the walk-count pipeline with the modularity-eigenvector baseline
//! on a clique hidden in a sparse ER background.
//!
//! `cargo run --release --example modularity_baseline [runs]`

use subgraph_ebtc::baseline::{run_baseline, BaselineConfig};
use subgraph_ebtc::graph::{clique, GraphGenSpec};
use subgraph_ebtc::identify::{run_pipeline, summarize, ExperimentConfig};

fn main() -> subgraph_ebtc::Result<()> {
    let runs: usize = std::env::args().nth(1).map_or(Ok(5), |s| s.parse()).expect("runs must be an integer");
    let cfg = ExperimentConfig::new(GraphGenSpec::erdos_renyi(512, 4.0, 0), clique(20)?, 1, runs, 3);

    let ebtc = summarize(&run_pipeline(&cfg)?);
    println!("ebtc        mean rate {:.4}  perfect {:.2}", ebtc.mean_rate, ebtc.perfect_fraction);

    let mut base = BaselineConfig::new(cfg);
    base.dimensions = 5;
    let (results, timings) = run_baseline(&base, 1)?;
    let s = summarize(&results);
    let sizes: Vec<usize> = results.iter().map(|r| r.candidates.len()).collect();
    println!("modularity  mean rate {:.4}  perfect {:.2}  cluster sizes {sizes:?}", s.mean_rate, s.perfect_fraction);
    println!("spectral phase {:.2}s", timings.ebtc);
    Ok(())
}
