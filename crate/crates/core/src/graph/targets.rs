//! Target sub-graphs to hide inside backgrounds.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Node count of the sparse target.
pub const SPARSE_TARGET_NODES: usize = 20;
/// Edge count of the sparse target (mean degree 2.1).
pub const SPARSE_TARGET_EDGES: usize = 21;
/// Degree cap of the sparse target; at least one hub reaches it.
pub const SPARSE_TARGET_MAX_DEGREE: usize = 4;

/// A small simple graph on local ids `0..t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetSpec {
    t: usize,
    edges: Vec<(usize, usize)>,
}

impl TargetSpec {
    /// Validates and normalizes: each pair stored as `(min, max)`, sorted.
    pub fn new(t: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if t < 2 {
            return Err(Error::param(format!("target needs at least 2 nodes, got {t}")));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= t || v >= t {
                return Err(Error::param(format!("target edge ({u}, {v}) out of range for t={t}")));
            }
            if u == v {
                return Err(Error::param(format!("target self-loop at {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        let before = norm.len();
        norm.dedup();
        if norm.len() != before {
            return Err(Error::param("duplicate target edge"));
        }
        Ok(Self { t, edges: norm })
    }

    pub fn node_count(&self) -> usize {
        self.t
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.t, self.edges.iter().copied()).expect("validated on construction")
    }
}

/// Complete graph on `t` nodes.
pub fn clique(t: usize) -> Result<TargetSpec> {
    if t < 2 {
        return Err(Error::param(format!("clique needs t >= 2, got {t}")));
    }
    let edges = (0..t).flat_map(|u| (u + 1..t).map(move |v| (u, v))).collect();
    TargetSpec::new(t, edges)
}

/// Connected 20-node, 21-edge target with maximum degree exactly 4.
///
/// Built as a degree-capped random recursive tree plus two chords, redrawn
/// until the hub constraint holds. Deterministic in `seed`.
pub fn canonical_sparse_target(seed: u64) -> TargetSpec {
    let t = SPARSE_TARGET_NODES;
    let cap = SPARSE_TARGET_MAX_DEGREE;
    let mut rng = SeededRng::new(seed);
    loop {
        let mut degree = [0usize; SPARSE_TARGET_NODES];
        let mut edges = Vec::with_capacity(SPARSE_TARGET_EDGES);
        for v in 1..t {
            let u = loop {
                let u = rng.below(v);
                if degree[u] < cap {
                    break u;
                }
            };
            edges.push((u, v));
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut attempts = 0;
        while edges.len() < SPARSE_TARGET_EDGES && attempts < 1000 {
            attempts += 1;
            let a = rng.below(t);
            let b = rng.below(t);
            let (u, v) = (a.min(b), a.max(b));
            if u == v || degree[u] >= cap || degree[v] >= cap || edges.contains(&(u, v)) {
                continue;
            }
            edges.push((u, v));
            degree[u] += 1;
            degree[v] += 1;
        }
        if edges.len() == SPARSE_TARGET_EDGES && degree.iter().max() == Some(&cap) {
            return TargetSpec::new(t, edges).expect("simple by construction");
        }
    }
}
