use nalgebra::DMatrix;
use subgraph_ebtc::baseline::{
    eigen_l1_scores, modularity_matrix, run_baseline, temporal_filter, two_means_split, BaselineConfig, FilterCoeffs,
    ModularityMatrix,
};
use subgraph_ebtc::graph::{clique, GraphGenSpec};
use subgraph_ebtc::identify::{embed, ExperimentConfig};
use subgraph_ebtc::rng::SeededRng;

#[test]
fn row_sums_vanish_and_matrix_is_symmetric() {
    for seed in 0..20 {
        let spec = match seed % 3 {
            0 => GraphGenSpec::erdos_renyi(80, 4.0, seed),
            1 => GraphGenSpec::barabasi_albert(80, 3, seed),
            _ => GraphGenSpec::watts_strogatz(80, 6, 0.2, seed),
        };
        let b = modularity_matrix(&spec.generate().unwrap()).unwrap();
        let m = b.matrix();
        for i in 0..80 {
            assert!(m.row(i).sum().abs() < 1e-9);
            for j in 0..80 {
                assert_eq!(m[(i, j)], m[(j, i)]);
            }
        }
    }
}

#[test]
fn filter_is_linear() {
    let mats = |offset: u64| -> Vec<ModularityMatrix> {
        (0..3)
            .map(|s| modularity_matrix(&GraphGenSpec::erdos_renyi(40, 5.0, offset + s).generate().unwrap()).unwrap())
            .collect()
    };
    let (m1, m2) = (mats(0), mats(10));
    let (alpha, beta) = (0.7, -1.3);
    let combined: Vec<ModularityMatrix> = m1
        .iter()
        .zip(&m2)
        .map(|(a, b)| {
            let degrees = a.degrees().iter().zip(b.degrees()).map(|(x, y)| alpha * x + beta * y).collect();
            ModularityMatrix::from_parts(a.matrix() * alpha + b.matrix() * beta, degrees).unwrap()
        })
        .collect();
    let c = FilterCoeffs::new(vec![0.5, 0.3, 0.2]).unwrap();
    let lhs = temporal_filter(&combined, &c).unwrap();
    let rhs = temporal_filter(&m1, &c).unwrap().matrix() * alpha + temporal_filter(&m2, &c).unwrap().matrix() * beta;
    assert!((lhs.matrix() - rhs).abs().max() < 1e-12);
}

#[test]
fn l1_norms_are_relabeling_invariant() {
    let g = GraphGenSpec::erdos_renyi(60, 6.0, 3).generate().unwrap();
    let perm = SeededRng::new(1).sample_distinct(60, 60);
    let a = eigen_l1_scores(&modularity_matrix(&g).unwrap(), 5).unwrap();
    let b = eigen_l1_scores(&modularity_matrix(&g.permuted(&perm).unwrap()).unwrap(), 5).unwrap();
    let mut na = a.l1_norms.clone();
    let mut nb = b.l1_norms.clone();
    na.sort_by(f64::total_cmp);
    nb.sort_by(f64::total_cmp);
    for (x, y) in na.iter().zip(&nb) {
        assert!((x - y).abs() < 1e-8, "{x} vs {y}");
    }
}

#[test]
fn clique_in_er_is_flagged_and_recovered() {
    let target = clique(20).unwrap();
    let mut flagged_in_clique = 0;
    let mut overlaps = Vec::new();
    for seed in 0..20u64 {
        let bg = GraphGenSpec::erdos_renyi(512, 4.0, seed).generate().unwrap();
        let (g, emb) = embed(&bg, &target, 1000 + seed).unwrap();
        let s = eigen_l1_scores(&modularity_matrix(&g).unwrap(), 5).unwrap();
        if emb.image().contains(&s.seed_node) {
            flagged_in_clique += 1;
        }
        let (found, _) = two_means_split(&s.coords, s.seed_node).unwrap();
        let hits = found.iter().filter(|v| emb.image().contains(v)).count();
        overlaps.push(hits as f64 / 20.0);
    }
    assert!(flagged_in_clique >= 16, "seed node in clique for {flagged_in_clique}/20");
    overlaps.sort_by(f64::total_cmp);
    let median = (overlaps[9] + overlaps[10]) / 2.0;
    assert!(median >= 0.5, "median overlap {median}");
}

#[test]
fn baseline_pipeline_is_deterministic() {
    let exp = ExperimentConfig::new(GraphGenSpec::erdos_renyi(150, 4.0, 0), clique(10).unwrap(), 2, 3, 8);
    let mut cfg = BaselineConfig::new(exp);
    cfg.dimensions = 4;
    let (a, _) = run_baseline(&cfg, 1).unwrap();
    let (b, _) = run_baseline(&cfg, 3).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().all(|r| r.hits <= 10));
    cfg.coeffs = Some(FilterCoeffs::new(vec![0.5, 0.25, 0.25]).unwrap());
    assert!(run_baseline(&cfg, 1).is_err());
}

#[test]
fn two_means_on_random_blobs() {
    let mut rng = SeededRng::new(2);
    let mut rows = Vec::new();
    for i in 0..100 {
        let center = if i < 15 { 8.0 } else { 0.0 };
        rows.push(center + rng.next_f64());
        rows.push(center + rng.next_f64());
        rows.push(rng.next_f64());
    }
    let coords = DMatrix::from_row_slice(100, 3, &rows);
    let (target, noise) = two_means_split(&coords, 99).unwrap();
    assert_eq!(target, (0..15).collect::<Vec<_>>());
    assert_eq!(noise.len(), 85);
}
