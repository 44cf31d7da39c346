//! Random background-graph models.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Random-graph model and its shape parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    /// G(n, p) with `p = avg_degree / (n - 1)`.
    #[serde(rename = "er")]
    ErdosRenyi { avg_degree: f64 },
    /// Preferential attachment, `m` edges per arriving node.
    #[serde(rename = "ba")]
    BarabasiAlbert { m: usize },
    /// Ring lattice with `k` nearest neighbours, each edge rewired with probability `beta`.
    #[serde(rename = "sw")]
    WattsStrogatz { k: usize, beta: f64 },
}

impl Model {
    pub fn short_name(&self) -> &'static str {
        match self {
            Model::ErdosRenyi { .. } => "er",
            Model::BarabasiAlbert { .. } => "ba",
            Model::WattsStrogatz { .. } => "sw",
        }
    }

    /// Expected mean degree for `n` nodes.
    pub fn nominal_degree(&self, n: usize) -> f64 {
        match *self {
            Model::ErdosRenyi { avg_degree } => avg_degree,
            Model::BarabasiAlbert { m } => {
                let edges = m * (m + 1) / 2 + m * n.saturating_sub(m + 1);
                2.0 * edges as f64 / n as f64
            }
            Model::WattsStrogatz { k, .. } => k as f64,
        }
    }
}

/// A fully determined background: model, size and seed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphGenSpec {
    #[serde(flatten)]
    pub model: Model,
    pub n: usize,
    pub seed: u64,
}

impl GraphGenSpec {
    pub fn erdos_renyi(n: usize, avg_degree: f64, seed: u64) -> Self {
        Self { model: Model::ErdosRenyi { avg_degree }, n, seed }
    }

    pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Self {
        Self { model: Model::BarabasiAlbert { m }, n, seed }
    }

    pub fn watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> Self {
        Self { model: Model::WattsStrogatz { k, beta }, n, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(Error::param(format!("need n >= 2, got {n}")));
        }
        match self.model {
            Model::ErdosRenyi { avg_degree } => {
                if !(avg_degree.is_finite() && (0.0..=(n - 1) as f64).contains(&avg_degree)) {
                    return Err(Error::param(format!(
                        "ER average degree {avg_degree} outside [0, {}]",
                        n - 1
                    )));
                }
            }
            Model::BarabasiAlbert { m } => {
                if m < 1 || m >= n {
                    return Err(Error::param(format!("BA needs 1 <= m < n, got m={m}, n={n}")));
                }
            }
            Model::WattsStrogatz { k, beta } => {
                if k % 2 != 0 || k < 2 || k >= n {
                    return Err(Error::param(format!(
                        "SW needs even k with 2 <= k < n, got k={k}, n={n}"
                    )));
                }
                if !(0.0..=1.0).contains(&beta) {
                    return Err(Error::param(format!("SW rewiring probability {beta} outside [0, 1]")));
                }
            }
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<Graph> {
        self.validate()?;
        let mut rng = SeededRng::new(self.seed);
        Ok(match self.model {
            Model::ErdosRenyi { avg_degree } => erdos_renyi(self.n, avg_degree, &mut rng),
            Model::BarabasiAlbert { m } => barabasi_albert(self.n, m, &mut rng),
            Model::WattsStrogatz { k, beta } => watts_strogatz(self.n, k, beta, &mut rng),
        })
    }
}

pub fn gen_erdos_renyi(spec: &GraphGenSpec) -> Result<Graph> {
    match spec.model {
        Model::ErdosRenyi { .. } => spec.generate(),
        _ => Err(Error::param("expected an ER spec")),
    }
}

pub fn gen_barabasi_albert(spec: &GraphGenSpec) -> Result<Graph> {
    match spec.model {
        Model::BarabasiAlbert { .. } => spec.generate(),
        _ => Err(Error::param("expected a BA spec")),
    }
}

pub fn gen_watts_strogatz(spec: &GraphGenSpec) -> Result<Graph> {
    match spec.model {
        Model::WattsStrogatz { .. } => spec.generate(),
        _ => Err(Error::param("expected an SW spec")),
    }
}

/// G(n, p) by geometric skipping over the lower triangle (Batagelj-Brandes),
/// so the cost is O(n + E) rather than O(n^2).
fn erdos_renyi(n: usize, avg_degree: f64, rng: &mut SeededRng) -> Graph {
    let p = avg_degree / (n - 1) as f64;
    if p <= 0.0 {
        return Graph::empty(n);
    }
    let mut lists = vec![Vec::new(); n];
    if p >= 1.0 {
        for u in 0..n {
            for v in u + 1..n {
                lists[u].push(v);
                lists[v].push(u);
            }
        }
        return Graph::from_lists(lists);
    }
    let log_q = (1.0 - p).ln();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r = rng.next_f64();
        let skip = ((1.0 - r).ln() / log_q).floor();
        w = w.saturating_add(1).saturating_add(skip as i64);
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            let u = w as usize;
            lists[v].push(u);
            lists[u].push(v);
        }
    }
    Graph::from_lists(lists)
}

fn barabasi_albert(n: usize, m: usize, rng: &mut SeededRng) -> Graph {
    let mut lists = vec![Vec::new(); n];
    // every edge endpoint, so a uniform pick is degree-proportional
    let mut endpoints = Vec::with_capacity(2 * (m * (m + 1) / 2 + m * (n - m - 1)));
    for u in 0..=m {
        for v in u + 1..=m {
            lists[u].push(v);
            lists[v].push(u);
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut chosen = Vec::with_capacity(m);
    for v in m + 1..n {
        chosen.clear();
        while chosen.len() < m {
            let u = endpoints[rng.below(endpoints.len())];
            if !chosen.contains(&u) {
                chosen.push(u);
            }
        }
        for &u in &chosen {
            lists[u].push(v);
            lists[v].push(u);
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    Graph::from_lists(lists)
}

fn watts_strogatz(n: usize, k: usize, beta: f64, rng: &mut SeededRng) -> Graph {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            if !rng.chance(beta) {
                continue;
            }
            // no free endpoint left for u
            if adj[u].len() >= n - 1 {
                continue;
            }
            let v = (u + j) % n;
            let w = loop {
                let w = rng.below(n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    Graph::from_lists(adj.into_iter().map(|s| s.into_iter().collect()).collect())
}
