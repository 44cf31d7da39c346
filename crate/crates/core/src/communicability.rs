//! Per-node communicability scores.
//!
//! Subgraph centrality is the diagonal of `e^A`; total communicability is the
//! row sums of `e^A`, i.e. `e^A 1`. Scores from several background
//! realizations that share one embedding are summed entrywise.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::{expm_action, expm_dense_oracle, KrylovParams};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScoreKind {
    /// Diagonal of `e^A`.
    SubgraphCentrality,
    /// Row sums of `e^A`.
    TotalCommunicability,
    /// Entrywise sum of total communicability over several backgrounds.
    AccumulatedTotal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    scores: Vec<f64>,
    kind: ScoreKind,
    num_backgrounds: usize,
}

impl ScoreVector {
    /// Wraps raw scores. Entries must be finite.
    pub fn new(scores: Vec<f64>, kind: ScoreKind, num_backgrounds: usize) -> Result<Self> {
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::param("scores must be finite"));
        }
        if num_backgrounds == 0 {
            return Err(Error::param("score vector must cover at least one background"));
        }
        Ok(Self { scores, kind, num_backgrounds })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn num_backgrounds(&self) -> usize {
        self.num_backgrounds
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn into_scores(self) -> Vec<f64> {
        self.scores
    }
}

/// `(e^A)_ii` for every node, through the dense oracle.
pub fn subgraph_centrality(g: &Graph) -> Result<ScoreVector> {
    let e = expm_dense_oracle(g)?;
    let diag = (0..g.node_count()).map(|i| e[(i, i)]).collect();
    ScoreVector::new(diag, ScoreKind::SubgraphCentrality, 1)
}

/// `e^A 1` by Krylov approximation.
pub fn total_communicability(g: &Graph, params: &KrylovParams) -> Result<ScoreVector> {
    let n = g.node_count();
    if n == 0 {
        return ScoreVector::new(Vec::new(), ScoreKind::TotalCommunicability, 1);
    }
    let r = expm_action(g, &vec![1.0; n], params)?;
    ScoreVector::new(r.value, ScoreKind::TotalCommunicability, 1)
}

/// Entrywise sum, in list order. No averaging.
///
/// Inputs may be single-background totals or earlier sums; the background
/// counts add up.
pub fn accumulate(vectors: &[ScoreVector]) -> Result<ScoreVector> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::param("nothing to accumulate"))?;
    let n = first.len();
    let mut sum = vec![0.0; n];
    let mut backgrounds = 0;
    for (idx, v) in vectors.iter().enumerate() {
        if v.kind == ScoreKind::SubgraphCentrality {
            return Err(Error::param(format!(
                "vector {idx} holds subgraph centrality; only total communicability sums"
            )));
        }
        if v.len() != n {
            return Err(Error::param(format!(
                "vector {idx} has length {}, expected {n}",
                v.len()
            )));
        }
        for (s, x) in sum.iter_mut().zip(&v.scores) {
            *s += x;
        }
        backgrounds += v.num_backgrounds;
    }
    ScoreVector::new(sum, ScoreKind::AccumulatedTotal, backgrounds)
}

/// `node,score` CSV, scores with 17 significant digits.
pub fn write_scores_csv<W: Write>(scores: &ScoreVector, mut writer: W) -> Result<()> {
    writeln!(writer, "node,score")?;
    for (node, s) in scores.scores.iter().enumerate() {
        writeln!(writer, "{node},{s:.16e}")?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a `node,score` CSV back into plain scores ordered by node id.
pub fn read_scores_csv<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        if lineno == 1 {
            if line.trim() != "node,score" {
                return Err(Error::Parse { line: 1, msg: "expected header `node,score`".into() });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Parse { line: lineno, msg: msg.into() };
        let (node, score) = line.split_once(',').ok_or_else(|| bad("expected `node,score`"))?;
        let node: usize = node.trim().parse().map_err(|_| bad("bad node id"))?;
        let score: f64 = score.trim().parse().map_err(|_| bad("bad score"))?;
        if node != rows.len() {
            return Err(bad("node ids must be consecutive from 0"));
        }
        rows.push(score);
    }
    Ok(rows)
}
