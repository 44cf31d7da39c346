//! Target placement, candidate selection and the multi-background pipeline.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::communicability::{accumulate, total_communicability, ScoreVector};
use crate::error::{Error, Result};
use crate::expm::KrylovParams;
use crate::graph::{Graph, GraphGenSpec, TargetSpec};
use crate::rng::{derive_seed, SeededRng};

/// Injective map from target node index to background vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Embedding {
    map: Vec<usize>,
}

impl Embedding {
    pub fn new(map: Vec<usize>, background_nodes: usize) -> Result<Self> {
        let mut seen = HashSet::with_capacity(map.len());
        for &v in &map {
            if v >= background_nodes {
                return Err(Error::param(format!(
                    "embedding image {v} out of range for {background_nodes} nodes"
                )));
            }
            if !seen.insert(v) {
                return Err(Error::param(format!("embedding maps two target nodes to {v}")));
            }
        }
        Ok(Self { map })
    }

    /// `t` distinct vertices of `0..n`, uniformly without replacement.
    pub fn random(t: usize, n: usize, seed: u64) -> Result<Self> {
        if t > n {
            return Err(Error::param(format!("target of {t} nodes does not fit in {n}")));
        }
        Ok(Self { map: SeededRng::new(seed).sample_distinct(n, t) })
    }

    pub fn image(&self) -> &[usize] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Places `target` at uniformly random vertices of `background` and adds its
/// edges by set union.
pub fn embed(background: &Graph, target: &TargetSpec, seed: u64) -> Result<(Graph, Embedding)> {
    let emb = Embedding::random(target.node_count(), background.node_count(), seed)?;
    let g = embed_with(background, target, &emb)?;
    Ok((g, emb))
}

pub fn embed_with(background: &Graph, target: &TargetSpec, emb: &Embedding) -> Result<Graph> {
    if emb.len() != target.node_count() {
        return Err(Error::param("embedding length differs from target size"));
    }
    let map = emb.image();
    background.with_edges(target.edges().iter().map(|&(u, v)| (map[u], map[v])))
}

/// Ids of the `k` largest scores, ranked; ties go to the smaller id.
pub fn top_k(scores: &ScoreVector, k: usize) -> Result<Vec<usize>> {
    top_k_scores(scores.scores(), k)
}

pub fn top_k_scores(scores: &[f64], k: usize) -> Result<Vec<usize>> {
    let n = scores.len();
    if k == 0 || k > n {
        return Err(Error::param(format!("k={k} outside 1..={n}")));
    }
    let rank = |a: &usize, b: &usize| -> Ordering {
        scores[*b].total_cmp(&scores[*a]).then(a.cmp(b))
    };
    let mut ids: Vec<usize> = (0..n).collect();
    if k < n {
        ids.select_nth_unstable_by(k - 1, rank);
        ids.truncate(k);
    }
    ids.sort_unstable_by(rank);
    Ok(ids)
}

/// Fraction of the target's vertices among `candidates`.
pub fn identification_rate(candidates: &[usize], emb: &Embedding) -> f64 {
    if emb.is_empty() {
        return 0.0;
    }
    count_hits(candidates, emb) as f64 / emb.len() as f64
}

fn count_hits(candidates: &[usize], emb: &Embedding) -> usize {
    let image: HashSet<usize> = emb.image().iter().copied().collect();
    let picked: HashSet<usize> = candidates.iter().copied().collect();
    picked.intersection(&image).count()
}

/// One Monte Carlo experiment: background model, target, and repetition counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Background model and size. The seed is replaced per realization.
    pub background: GraphGenSpec,
    pub target: TargetSpec,
    /// Background realizations summed per run.
    pub num_backgrounds: usize,
    /// Candidate-set size; `None` means the target size.
    pub k: Option<usize>,
    pub runs: usize,
    pub base_seed: u64,
    pub krylov: KrylovParams,
}

impl ExperimentConfig {
    pub fn new(background: GraphGenSpec, target: TargetSpec, num_backgrounds: usize, runs: usize, base_seed: u64) -> Self {
        Self {
            background,
            target,
            num_backgrounds,
            k: None,
            runs,
            base_seed,
            krylov: KrylovParams::default(),
        }
    }

    pub fn candidates(&self) -> usize {
        self.k.unwrap_or(self.target.node_count())
    }

    pub fn validate(&self) -> Result<()> {
        self.background.validate()?;
        self.krylov.validate()?;
        let n = self.background.n;
        let t = self.target.node_count();
        if t > n {
            return Err(Error::param(format!("target of {t} nodes exceeds background of {n}")));
        }
        let k = self.candidates();
        if k == 0 || k > n {
            return Err(Error::param(format!("k={k} outside 1..={n}")));
        }
        if self.num_backgrounds == 0 {
            return Err(Error::param("need at least one background"));
        }
        if self.runs == 0 {
            return Err(Error::param("need at least one run"));
        }
        Ok(())
    }

    /// Seed of run `run`.
    pub fn run_seed(&self, run: usize) -> u64 {
        self.base_seed.wrapping_add(run as u64)
    }

    /// Embedding seed and per-background seeds of run `run`.
    pub fn realization_seeds(&self, run: usize) -> (u64, Vec<u64>) {
        let s = self.run_seed(run);
        let backgrounds = (0..self.num_backgrounds as u64).map(|b| derive_seed(s, b + 1)).collect();
        (derive_seed(s, 0), backgrounds)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run: usize,
    pub embedding: Embedding,
    pub candidates: Vec<usize>,
    pub hits: usize,
    pub rate: f64,
    /// Mean degree of the backgrounds before embedding, averaged over the run.
    pub mean_background_degree: f64,
}

impl RunResult {
    pub fn new(run: usize, embedding: Embedding, candidates: Vec<usize>, mean_background_degree: f64) -> Self {
        let hits = count_hits(&candidates, &embedding);
        let rate = identification_rate(&candidates, &embedding);
        Self { run, embedding, candidates, hits, rate, mean_background_degree }
    }

    pub fn is_perfect(&self) -> bool {
        self.hits == self.embedding.len()
    }
}

/// Wall time per phase in seconds, summed over runs and worker threads.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub generation: f64,
    pub ebtc: f64,
    pub selection: f64,
}

impl std::ops::AddAssign for PhaseTimings {
    fn add_assign(&mut self, rhs: Self) {
        self.generation += rhs.generation;
        self.ebtc += rhs.ebtc;
        self.selection += rhs.selection;
    }
}

/// Summed total communicability over the run's backgrounds, top-k, rate.
pub fn run_pipeline(cfg: &ExperimentConfig) -> Result<Vec<RunResult>> {
    cfg.validate()?;
    let out: Result<Vec<_>> = (0..cfg.runs).into_par_iter().map(|r| single_run(cfg, r)).collect();
    Ok(out?.into_iter().map(|(res, _)| res).collect())
}

/// [`run_pipeline`] on a dedicated pool of `jobs` threads, with phase timings.
/// Results do not depend on `jobs`.
pub fn run_pipeline_with_jobs(cfg: &ExperimentConfig, jobs: usize) -> Result<(Vec<RunResult>, PhaseTimings)> {
    cfg.validate()?;
    let pool = thread_pool(jobs)?;
    let out: Result<Vec<_>> =
        pool.install(|| (0..cfg.runs).into_par_iter().map(|r| single_run(cfg, r)).collect());
    let mut timings = PhaseTimings::default();
    let mut results = Vec::with_capacity(cfg.runs);
    for (res, t) in out? {
        timings += t;
        results.push(res);
    }
    Ok((results, timings))
}

pub(crate) fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))
}

fn single_run(cfg: &ExperimentConfig, run: usize) -> Result<(RunResult, PhaseTimings)> {
    let (embed_seed, bg_seeds) = cfg.realization_seeds(run);
    let emb = Embedding::random(cfg.target.node_count(), cfg.background.n, embed_seed)?;

    let per_background: Result<Vec<_>> = bg_seeds
        .par_iter()
        .map(|&seed| {
            let start = Instant::now();
            let bg = cfg.background.with_seed(seed).generate()?;
            let degree = bg.mean_degree();
            let g = embed_with(&bg, &cfg.target, &emb)?;
            let generated = Instant::now();
            let scores = total_communicability(&g, &cfg.krylov)?;
            let timing = PhaseTimings {
                generation: (generated - start).as_secs_f64(),
                ebtc: generated.elapsed().as_secs_f64(),
                selection: 0.0,
            };
            Ok((scores, degree, timing))
        })
        .collect();
    let per_background = per_background?;

    let start = Instant::now();
    let mut timings = PhaseTimings::default();
    let mut vectors = Vec::with_capacity(per_background.len());
    let mut degree_sum = 0.0;
    for (scores, degree, t) in per_background {
        vectors.push(scores);
        degree_sum += degree;
        timings += t;
    }
    let summed = accumulate(&vectors)?;
    let candidates = top_k(&summed, cfg.candidates())?;
    timings.selection = start.elapsed().as_secs_f64();

    let mean_degree = degree_sum / cfg.num_backgrounds as f64;
    Ok((RunResult::new(run, emb, candidates, mean_degree), timings))
}

/// Mean rate, sample standard deviation and fraction of perfect runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateSummary {
    pub runs: usize,
    pub mean_rate: f64,
    pub std_rate: f64,
    pub perfect_fraction: f64,
    pub mean_background_degree: f64,
}

pub fn summarize(results: &[RunResult]) -> RateSummary {
    let runs = results.len();
    if runs == 0 {
        return RateSummary { runs, mean_rate: 0.0, std_rate: 0.0, perfect_fraction: 0.0, mean_background_degree: 0.0 };
    }
    let n = runs as f64;
    let mean = results.iter().map(|r| r.rate).sum::<f64>() / n;
    let std = if runs > 1 {
        (results.iter().map(|r| (r.rate - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    RateSummary {
        runs,
        mean_rate: mean,
        std_rate: std,
        perfect_fraction: results.iter().filter(|r| r.is_perfect()).count() as f64 / n,
        mean_background_degree: results.iter().map(|r| r.mean_background_degree).sum::<f64>() / n,
    }
}
