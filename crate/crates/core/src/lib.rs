//! Identify the nodes of a small target sub-graph hidden in larger random
//! backgrounds.
//!
//! Each node is scored by its total communicability, the row sum of the
//! adjacency-matrix exponential (`e^A 1`), computed with a Lanczos
//! approximation in time linear in the number of edges. When several
//! background realizations share one placement of the target, their score
//! vectors are summed before the top-`k` nodes are taken as candidates; the
//! target's walks reinforce across realizations while the background's do
//! not.
//!
//! Module map:
//!
//! - [`graph`]: compressed adjacency graphs, ER/BA/SW generators, targets, edge-list IO
//! - [`expm`]: `e^A v` by Lanczos, plus a dense reference
//! - [`communicability`]: subgraph centrality, total communicability, summation
//! - [`identify`]: embedding, top-`k` selection, identification rate, Monte Carlo pipeline
//! - [`baseline`]: modularity-matrix comparator
//! - [`experiments`]: experiment files, JSON reports, summary CSV
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod baseline;
pub mod communicability;
pub mod error;
pub mod experiments;
pub mod expm;
pub mod graph;
pub mod identify;
pub mod rng;

pub use communicability::{accumulate, subgraph_centrality, total_communicability, ScoreKind, ScoreVector};
pub use error::{Error, Result};
pub use expm::{expm_action, expm_dense_oracle, ExpmResult, KrylovParams};
pub use graph::{canonical_sparse_target, clique, density, Graph, GraphGenSpec, Model, TargetSpec};
pub use identify::{
    embed, identification_rate, run_pipeline, summarize, top_k, Embedding, ExperimentConfig, RateSummary, RunResult,
};
