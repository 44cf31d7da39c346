//! Dump accumulated scores for one run, sorted, with the target nodes marked.
//!
//! Writes `node,score,rank,in_target` rows to stdout; the top-k threshold goes
//! to stderr. Handy for plotting how far the target separates from the noise.
//!
//! `cargo run --release --example score_profile [num_backgrounds] > scores.csv`

use subgraph_ebtc::communicability::{accumulate, total_communicability};
use subgraph_ebtc::expm::KrylovParams;
use subgraph_ebtc::graph::{canonical_sparse_target, GraphGenSpec};
use subgraph_ebtc::identify::{embed_with, identification_rate, top_k, Embedding, ExperimentConfig};

fn main() -> subgraph_ebtc::Result<()> {
    let n_bg: usize = std::env::args().nth(1).map_or(Ok(40), |s| s.parse()).expect("num_backgrounds must be an integer");
    let target = canonical_sparse_target(0);
    let cfg = ExperimentConfig::new(GraphGenSpec::erdos_renyi(1024, 2.0, 0), target.clone(), n_bg, 1, 7);
    let (emb_seed, bg_seeds) = cfg.realization_seeds(0);
    let emb = Embedding::random(target.node_count(), cfg.background.n, emb_seed)?;

    let params = KrylovParams::default();
    let mut per_background = Vec::with_capacity(n_bg);
    for seed in bg_seeds {
        let bg = cfg.background.with_seed(seed).generate()?;
        per_background.push(total_communicability(&embed_with(&bg, &target, &emb)?, &params)?);
    }
    let total = accumulate(&per_background)?;
    let picked = top_k(&total, cfg.candidates())?;
    let threshold = total.scores()[*picked.last().expect("k >= 1")];
    eprintln!("threshold {threshold:.6e}, rate {:.3}", identification_rate(&picked, &emb));

    let mut order: Vec<usize> = (0..total.len()).collect();
    order.sort_by(|&a, &b| total.scores()[b].total_cmp(&total.scores()[a]).then(a.cmp(&b)));
    println!("node,score,rank,in_target");
    for (rank, node) in order.into_iter().enumerate() {
        let hit = emb.image().contains(&node);
        println!("{node},{:.10e},{rank},{}", total.scores()[node], u8::from(hit));
    }
    Ok(())
}
