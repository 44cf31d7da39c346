//! Generate one background of each model and print its degree statistics.
//!
//! `cargo run --release --example generate_backgrounds [nodes]`

use subgraph_ebtc::graph::{density, GraphGenSpec};

fn main() -> subgraph_ebtc::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(Ok(1024), |s| s.parse()).expect("nodes must be an integer");
    let specs = [
        GraphGenSpec::erdos_renyi(n, 4.0, 1),
        GraphGenSpec::barabasi_albert(n, 2, 1),
        GraphGenSpec::watts_strogatz(n, 4, 0.1, 1),
    ];
    println!("{:<4} {:>8} {:>8} {:>10} {:>8} {:>10}", "model", "nodes", "edges", "mean_deg", "max_deg", "density");
    for spec in specs {
        let g = spec.generate()?;
        println!(
            "{:<4} {:>8} {:>8} {:>10.3} {:>8} {:>10.2e}",
            spec.model.short_name(),
            g.node_count(),
            g.edge_count(),
            g.mean_degree(),
            g.max_degree(),
            density(&g)?
        );
    }
    Ok(())
}
