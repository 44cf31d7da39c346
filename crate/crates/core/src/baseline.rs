//! Modularity-matrix comparator.
//!
//! `B = A - d d^T / 2E`, optionally filtered over a window of background
//! realizations, is eigendecomposed; the leading eigenvector with the smallest
//! L1 norm marks an anomalous node, and a 2-means split of the spectral
//! coordinates grows it into a candidate set (the smaller cluster).
//!
//! Everything here is dense and cubic in `n`; it is meant for desk-scale
//! comparison only.

use std::time::Instant;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::identify::{embed_with, thread_pool, Embedding, ExperimentConfig, PhaseTimings, RunResult};

/// Largest graph accepted by [`modularity_matrix`].
pub const MODULARITY_LIMIT: usize = 2048;
/// Default number of leading eigenvectors kept.
pub const DEFAULT_DIMENSIONS: usize = 10;
const MAX_LLOYD_ITERATIONS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct ModularityMatrix {
    matrix: DMatrix<f64>,
    degrees: Vec<f64>,
}

impl ModularityMatrix {
    /// Wraps an arbitrary symmetric matrix, e.g. a linear combination of
    /// modularity matrices.
    pub fn from_parts(matrix: DMatrix<f64>, degrees: Vec<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n || degrees.len() != n {
            return Err(Error::param("modularity matrix must be square with one degree per row"));
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (matrix[(i, j)], matrix[(j, i)]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::param("modularity matrix must be symmetric"));
                }
            }
        }
        Ok(Self { matrix, degrees })
    }

    pub fn node_count(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }
}

pub fn modularity_matrix(g: &Graph) -> Result<ModularityMatrix> {
    let n = g.node_count();
    if n > MODULARITY_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: MODULARITY_LIMIT,
            hint: "the modularity baseline is dense",
        });
    }
    let m2 = 2.0 * g.edge_count() as f64;
    if m2 == 0.0 {
        return Err(Error::param("modularity matrix needs at least one edge"));
    }
    let degrees: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    let mut b = DMatrix::from_fn(n, n, |i, j| -degrees[i] * degrees[j] / m2);
    for (u, v) in g.edges() {
        b[(u, v)] += 1.0;
        b[(v, u)] += 1.0;
    }
    Ok(ModularityMatrix { matrix: b, degrees })
}

/// Window weights `c_0 .. c_{L-1}`, summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FilterCoeffs(Vec<f64>);

impl FilterCoeffs {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::param("filter needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("filter coefficients must be finite"));
        }
        let sum: f64 = coeffs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::param(format!("filter coefficients sum to {sum}, expected 1")));
        }
        Ok(Self(coeffs))
    }

    /// Plain moving average over `len` realizations.
    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::param("filter needs at least one coefficient"));
        }
        Ok(Self(vec![1.0 / len as f64; len]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for FilterCoeffs {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<FilterCoeffs> for Vec<f64> {
    fn from(c: FilterCoeffs) -> Self {
        c.0
    }
}

/// `sum_l c_l B(k - l)`, with `mats[l]` holding `B(k - l)` (newest first).
pub fn temporal_filter(mats: &[ModularityMatrix], coeffs: &FilterCoeffs) -> Result<ModularityMatrix> {
    if mats.len() != coeffs.len() {
        return Err(Error::param(format!(
            "{} matrices for {} coefficients",
            mats.len(),
            coeffs.len()
        )));
    }
    let n = mats[0].node_count();
    if mats.iter().any(|m| m.node_count() != n) {
        return Err(Error::param("matrices in the window differ in size"));
    }
    let mut matrix = DMatrix::zeros(n, n);
    let mut degrees = vec![0.0; n];
    for (m, &c) in mats.iter().zip(coeffs.as_slice()) {
        matrix += &m.matrix * c;
        for (d, x) in degrees.iter_mut().zip(&m.degrees) {
            *d += c * x;
        }
    }
    Ok(ModularityMatrix { matrix, degrees })
}

/// Leading eigenvectors of a modularity matrix and their L1 norms.
#[derive(Clone, Debug)]
pub struct EigenL1 {
    /// Largest eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    pub l1_norms: Vec<f64>,
    /// Index (into the leading set) of the eigenvector with the smallest L1 norm.
    pub flagged: usize,
    /// Node with the largest absolute component in the flagged eigenvector.
    pub seed_node: usize,
    /// `n x r`; column `i` is the eigenvector for `eigenvalues[i]`.
    pub coords: DMatrix<f64>,
}

pub fn eigen_l1_scores(b: &ModularityMatrix, r: usize) -> Result<EigenL1> {
    let n = b.node_count();
    if r == 0 || r > n {
        return Err(Error::param(format!("projection dimension {r} outside 1..={n}")));
    }
    let eig = SymmetricEigen::try_new(b.matrix.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("modularity eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &c| eig.eigenvalues[c].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&c)));
    order.truncate(r);

    let coords = DMatrix::from_fn(n, r, |i, j| eig.eigenvectors[(i, order[j])]);
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let l1_norms: Vec<f64> = (0..r).map(|j| coords.column(j).iter().map(|x| x.abs()).sum()).collect();
    if l1_norms.iter().chain(&eigenvalues).any(|x| !x.is_finite()) {
        return Err(Error::Numerical("non-finite eigenpair".into()));
    }
    let flagged = (0..r)
        .min_by(|&a, &c| l1_norms[a].total_cmp(&l1_norms[c]))
        .expect("r >= 1");
    let seed_node = (0..n)
        .max_by(|&a, &c| {
            coords[(a, flagged)]
                .abs()
                .total_cmp(&coords[(c, flagged)].abs())
                .then(c.cmp(&a))
        })
        .expect("n >= 1");
    Ok(EigenL1 { eigenvalues, l1_norms, flagged, seed_node, coords })
}

/// Lloyd's 2-means on the rows of `coords`, seeded at `seed_node` and at the
/// grand mean. Returns `(target, noise)`: the smaller cluster is the target,
/// and on equal sizes the one containing `seed_node`.
pub fn two_means_split(coords: &DMatrix<f64>, seed_node: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let (n, r) = coords.shape();
    if r == 0 {
        return Err(Error::param("need at least one coordinate"));
    }
    if seed_node >= n {
        return Err(Error::param(format!("seed node {seed_node} out of range for {n} rows")));
    }
    let row = |i: usize| coords.row(i);
    let mean = coords.row_mean();
    let spread = (0..n).map(|i| (row(i) - &mean).norm()).fold(0.0, f64::max);
    if spread <= 1e-12 * mean.norm().max(1.0) {
        return Err(Error::Numerical("all points coincide; only one cluster".into()));
    }

    let mut centroids = [row(seed_node).into_owned(), mean];
    let mut in_first = vec![false; n];
    for iteration in 0..MAX_LLOYD_ITERATIONS {
        let mut changed = false;
        for (i, slot) in in_first.iter_mut().enumerate() {
            let first = (row(i) - &centroids[0]).norm_squared() <= (row(i) - &centroids[1]).norm_squared();
            changed |= *slot != first;
            *slot = first;
        }
        if iteration > 0 && !changed {
            break;
        }
        for (c, want) in [(0usize, true), (1, false)] {
            let members: Vec<usize> = (0..n).filter(|&i| in_first[i] == want).collect();
            if !members.is_empty() {
                let mut sum = row(members[0]).into_owned() * 0.0;
                for &i in &members {
                    sum += row(i);
                }
                centroids[c] = sum / members.len() as f64;
            }
        }
    }

    let first: Vec<usize> = (0..n).filter(|&i| in_first[i]).collect();
    let second: Vec<usize> = (0..n).filter(|&i| !in_first[i]).collect();
    if first.is_empty() || second.is_empty() {
        return Err(Error::Numerical("2-means collapsed to one cluster".into()));
    }
    let seed_in_first = in_first[seed_node];
    Ok(match first.len().cmp(&second.len()) {
        std::cmp::Ordering::Less => (first, second),
        std::cmp::Ordering::Greater => (second, first),
        std::cmp::Ordering::Equal if seed_in_first => (first, second),
        std::cmp::Ordering::Equal => (second, first),
    })
}

/// Modularity baseline on the same realizations as the EBTC pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    /// `num_backgrounds` is the filter window length `L`.
    pub experiment: ExperimentConfig,
    pub dimensions: usize,
    /// `None` means uniform weights over the window.
    pub coeffs: Option<FilterCoeffs>,
}

impl BaselineConfig {
    pub fn new(experiment: ExperimentConfig) -> Self {
        Self { experiment, dimensions: DEFAULT_DIMENSIONS, coeffs: None }
    }

    pub fn coefficients(&self) -> Result<FilterCoeffs> {
        match &self.coeffs {
            Some(c) => Ok(c.clone()),
            None => FilterCoeffs::uniform(self.experiment.num_backgrounds),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.experiment.validate()?;
        let n = self.experiment.background.n;
        if n > MODULARITY_LIMIT {
            return Err(Error::TooLarge { n, limit: MODULARITY_LIMIT, hint: "the modularity baseline is dense" });
        }
        if self.dimensions == 0 || self.dimensions > n {
            return Err(Error::param(format!("projection dimension {} outside 1..={n}", self.dimensions)));
        }
        let coeffs = self.coefficients()?;
        if coeffs.len() != self.experiment.num_backgrounds {
            return Err(Error::param(format!(
                "{} coefficients for a window of {} backgrounds",
                coeffs.len(),
                self.experiment.num_backgrounds
            )));
        }
        Ok(())
    }
}

/// Runs the baseline. Candidates are the smaller 2-means cluster, so their
/// count varies between runs.
pub fn run_baseline(cfg: &BaselineConfig, jobs: usize) -> Result<(Vec<RunResult>, PhaseTimings)> {
    cfg.validate()?;
    let coeffs = cfg.coefficients()?;
    let pool = thread_pool(jobs)?;
    let out: Result<Vec<_>> = pool.install(|| {
        (0..cfg.experiment.runs)
            .into_par_iter()
            .map(|r| baseline_run(cfg, &coeffs, r))
            .collect()
    });
    let mut timings = PhaseTimings::default();
    let mut results = Vec::with_capacity(cfg.experiment.runs);
    for (res, t) in out? {
        timings += t;
        results.push(res);
    }
    Ok((results, timings))
}

fn baseline_run(cfg: &BaselineConfig, coeffs: &FilterCoeffs, run: usize) -> Result<(RunResult, PhaseTimings)> {
    let exp = &cfg.experiment;
    let (embed_seed, bg_seeds) = exp.realization_seeds(run);
    let emb = Embedding::random(exp.target.node_count(), exp.background.n, embed_seed)?;
    let mut timings = PhaseTimings::default();

    let start = Instant::now();
    let mut mats = Vec::with_capacity(bg_seeds.len());
    let mut degree_sum = 0.0;
    // newest realization first
    for &seed in bg_seeds.iter().rev() {
        let bg = exp.background.with_seed(seed).generate()?;
        degree_sum += bg.mean_degree();
        let g = embed_with(&bg, &exp.target, &emb)?;
        mats.push(modularity_matrix(&g)?);
    }
    timings.generation = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let filtered = temporal_filter(&mats, coeffs)?;
    let spectral = eigen_l1_scores(&filtered, cfg.dimensions)?;
    timings.ebtc = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let (target, _) = two_means_split(&spectral.coords, spectral.seed_node)?;
    timings.selection = start.elapsed().as_secs_f64();

    let mean_degree = degree_sum / bg_seeds.len() as f64;
    Ok((RunResult::new(run, emb, target, mean_degree), timings))
}
