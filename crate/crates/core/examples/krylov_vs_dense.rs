//! Total communicability by Lanczos against closed forms and the dense oracle.
//!
//! `cargo run --release --example krylov_vs_dense`

use subgraph_ebtc::communicability::total_communicability;
use subgraph_ebtc::expm::{expm_dense_oracle, KrylovParams};
use subgraph_ebtc::graph::{clique, Graph, GraphGenSpec};

fn max_rel_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| ((x - y) / y).abs()).fold(0.0, f64::max)
}

fn main() -> subgraph_ebtc::Result<()> {
    let params = KrylovParams::default();

    // K_t has every row sum equal to e^(t-1)
    for t in [1, 2, 3, 20] {
        let g = if t == 1 { Graph::empty(1) } else { clique(t)?.to_graph() };
        let tc = total_communicability(&g, &params)?;
        let exact = ((t - 1) as f64).exp();
        println!("K{t:<3} krylov {:.12e}  exact {:.12e}", tc.scores()[0], exact);
    }

    for spec in [
        GraphGenSpec::erdos_renyi(200, 8.0, 4),
        GraphGenSpec::barabasi_albert(200, 3, 4),
        GraphGenSpec::watts_strogatz(200, 6, 0.2, 4),
    ] {
        let g = spec.generate()?;
        let e = expm_dense_oracle(&g)?;
        let rows: Vec<f64> = (0..g.node_count()).map(|i| e.row(i).sum()).collect();
        let tc = total_communicability(&g, &params)?;
        println!("{} n=200  max rel err vs dense {:.2e}", spec.model.short_name(), max_rel_err(tc.scores(), &rows));
    }
    Ok(())
}
