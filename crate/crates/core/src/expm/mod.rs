//! Action of the adjacency-matrix exponential on a vector.
//!
//! [`expm_action`] approximates `e^A v` from the Krylov space spanned by
//! `v, Av, A^2 v, ...`. Symmetric Lanczos (with full reorthogonalization)
//! reduces `A` to a small tridiagonal `T_j`, and the iterate after `j` steps is
//! `||v|| V_j exp(T_j) e_1`. Successive iterates are compared entry by entry
//! until every entry's relative change drops below the tolerance. If the subspace limit is hit
//! first, the step length is halved and the expansion restarts from the
//! current iterate, so `e^A v` is assembled as a product of shorter steps.
//!
//! [`expm_dense_oracle`] forms the full `e^A` by dense eigendecomposition and
//! exists to check the Krylov path on small graphs.

mod dense;
mod tridiag;

pub use dense::{expm_dense_oracle, DENSE_LIMIT};
pub use tridiag::{expm_tridiag_first_column, tridiag_eigen, TridiagEigen};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Relative size of a Lanczos residual treated as an exact invariant subspace.
const BREAKDOWN_TOL: f64 = 1e-12;
/// Absolute per-entry change, relative to the iterate norm, below which
/// entries count as converged regardless of their own size.
const ROUNDOFF_FLOOR: f64 = 1e3 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrylovParams {
    /// Maximum Krylov subspace dimension per expansion.
    pub m: usize,
    /// Entrywise relative change between successive iterates that counts as converged.
    pub tol: f64,
    /// How many times the step may be halved before giving up.
    pub max_restarts: usize,
}

impl Default for KrylovParams {
    fn default() -> Self {
        Self { m: 30, tol: 1e-8, max_restarts: 4 }
    }
}

impl KrylovParams {
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::param(format!("Krylov dimension must be >= 2, got {}", self.m)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::param(format!("Krylov tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpmResult {
    pub value: Vec<f64>,
    /// Largest entrywise relative change of the final Lanczos step, summed
    /// over accepted time steps.
    pub est_error: f64,
    /// Lanczos steps across all expansions, including discarded ones.
    pub iterations: usize,
}

/// Approximates `e^A v` for the adjacency matrix `A` of `g`.
///
/// When the restart budget runs out the last expansion is accepted anyway and
/// `est_error` reports how far it was from converging.
pub fn expm_action(g: &Graph, v: &[f64], params: &KrylovParams) -> Result<ExpmResult> {
    params.validate()?;
    if v.len() != g.node_count() {
        return Err(Error::param(format!(
            "vector length {} does not match {} nodes",
            v.len(),
            g.node_count()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::param("input vector has non-finite entries"));
    }
    if norm(v) == 0.0 {
        return Err(Error::param("input vector is zero"));
    }

    let mut x = v.to_vec();
    // dyadic steps, so `done` reaches exactly 1
    let mut done = 0.0;
    let mut step = 1.0f64;
    let mut restarts = 0;
    let mut iterations = 0;
    let mut est_error = 0.0;
    while done < 1.0 {
        let tau = step.min(1.0 - done);
        let seg = lanczos_step(g, &x, tau, params)?;
        iterations += seg.steps;
        if seg.converged || restarts >= params.max_restarts {
            x = seg.value;
            done += tau;
            est_error += seg.est_error;
        } else {
            restarts += 1;
            step = tau / 2.0;
        }
    }
    Ok(ExpmResult { value: x, est_error, iterations })
}

struct Segment {
    value: Vec<f64>,
    est_error: f64,
    steps: usize,
    converged: bool,
}

/// One Lanczos expansion approximating `exp(tau A) x`.
fn lanczos_step(g: &Graph, x: &[f64], tau: f64, params: &KrylovParams) -> Result<Segment> {
    let n = x.len();
    let beta0 = norm(x);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(params.m);
    basis.push(x.iter().map(|xi| xi / beta0).collect());
    let mut alpha = Vec::with_capacity(params.m);
    let mut off: Vec<f64> = Vec::with_capacity(params.m);
    let mut prev: Option<Vec<f64>> = None;
    let mut w = vec![0.0; n];
    let mut scale: f64 = 0.0;

    for j in 0..params.m {
        g.mul_vec(&basis[j], &mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        axpy(-a, &basis[j], &mut w);
        if j > 0 {
            axpy(-off[j - 1], &basis[j - 1], &mut w);
        }
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                axpy(-c, q, &mut w);
            }
        }
        let b = norm(&w);
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Numerical(format!("non-finite Lanczos coefficient at step {}", j + 1)));
        }
        scale = scale.max(a.abs() + b + off.last().copied().unwrap_or(0.0));

        let mut coeffs = expm_tridiag_first_column(&alpha, &off, tau)?;
        coeffs.iter_mut().for_each(|c| *c *= beta0);

        if b <= BREAKDOWN_TOL * scale {
            return Ok(Segment {
                value: combine(&basis, &coeffs, n)?,
                est_error: 0.0,
                steps: j + 1,
                converged: true,
            });
        }
        if let Some(prev) = &prev {
            let value = combine(&basis, &coeffs, n)?;
            let delta: Vec<f64> = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c - prev.get(i).copied().unwrap_or(0.0))
                .collect();
            let change = combine(&basis, &delta, n)?;
            let est_error = entrywise_change(&value, &change, params.tol);
            if est_error <= params.tol || j + 1 == params.m {
                return Ok(Segment {
                    value,
                    est_error,
                    steps: j + 1,
                    converged: est_error <= params.tol,
                });
            }
        }
        basis.push(w.iter().map(|wi| wi / b).collect());
        off.push(b);
        prev = Some(coeffs);
    }
    unreachable!("m >= 2 guarantees a return inside the loop")
}

/// `max_i |d_i| / (|x_i| + (ROUNDOFF_FLOOR / tol) ||x||)` for the change `d`
/// between successive iterates. This is at most `tol` exactly when every entry
/// moved by less than `tol` relative to itself, up to an absolute allowance of
/// `ROUNDOFF_FLOOR ||x||` for entries too small to resolve against the norm.
fn entrywise_change(value: &[f64], change: &[f64], tol: f64) -> f64 {
    let floor = ROUNDOFF_FLOOR / tol * norm(value);
    value
        .iter()
        .zip(change)
        .map(|(x, d)| {
            let denom = x.abs() + floor;
            if denom == 0.0 {
                0.0
            } else {
                d.abs() / denom
            }
        })
        .fold(0.0, f64::max)
}

fn combine(basis: &[Vec<f64>], coeffs: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut out = vec![0.0; n];
    for (q, &c) in basis.iter().zip(coeffs) {
        axpy(c, q, &mut out);
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite Krylov iterate".into()));
    }
    Ok(out)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, GraphGenSpec};

    fn ones(n: usize) -> Vec<f64> {
        vec![1.0; n]
    }

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        assert!(
            ((actual - expected) / expected).abs() <= tol,
            "actual {actual}, expected {expected}"
        );
    }

    #[test]
    fn empty_graph_is_identity() {
        let g = Graph::empty(5);
        let r = expm_action(&g, &ones(5), &KrylovParams::default()).unwrap();
        assert_eq!(r.value, ones(5));
        assert_eq!(r.est_error, 0.0);
    }

    #[test]
    fn single_edge_closed_form() {
        let g = clique(2).unwrap().to_graph();
        let r = expm_action(&g, &ones(2), &KrylovParams::default()).unwrap();
        for v in r.value {
            assert_rel(v, std::f64::consts::E, 1e-12);
        }
        let r = expm_action(&g, &[1.0, 0.0], &KrylovParams::default()).unwrap();
        assert_rel(r.value[0], 1f64.cosh(), 1e-12);
        assert_rel(r.value[1], 1f64.sinh(), 1e-12);
    }

    #[test]
    fn complete_graphs_closed_form() {
        for t in [3usize, 20] {
            let g = clique(t).unwrap().to_graph();
            let r = expm_action(&g, &ones(t), &KrylovParams::default()).unwrap();
            let expected = ((t - 1) as f64).exp();
            for v in r.value {
                assert_rel(v, expected, 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Graph::empty(3);
        let p = KrylovParams::default();
        assert!(matches!(expm_action(&g, &[0.0; 3], &p), Err(Error::Param(_))));
        assert!(matches!(expm_action(&g, &[1.0; 2], &p), Err(Error::Param(_))));
        assert!(expm_action(&g, &[f64::NAN, 1.0, 1.0], &p).is_err());
        let bad = KrylovParams { m: 1, ..p };
        assert!(expm_action(&g, &[1.0; 3], &bad).is_err());
        let bad = KrylovParams { tol: 0.0, ..p };
        assert!(expm_action(&g, &[1.0; 3], &bad).is_err());
    }

    #[test]
    fn restarts_recover_accuracy_with_small_subspace() {
        let g = GraphGenSpec::erdos_renyi(300, 12.0, 4).generate().unwrap();
        let exact = expm_action(&g, &ones(300), &KrylovParams::default()).unwrap();
        let tight = KrylovParams { m: 6, tol: 1e-8, max_restarts: 8 };
        let r = expm_action(&g, &ones(300), &tight).unwrap();
        assert!(r.est_error < 1e-6, "{}", r.est_error);
        for (a, b) in r.value.iter().zip(&exact.value) {
            assert_rel(*a, *b, 1e-6);
        }
    }

    #[test]
    fn exhausted_restarts_report_error() {
        let g = GraphGenSpec::erdos_renyi(300, 12.0, 4).generate().unwrap();
        let p = KrylovParams { m: 3, tol: 1e-14, max_restarts: 0 };
        let r = expm_action(&g, &ones(300), &p).unwrap();
        assert!(r.est_error > 1e-14);
        assert_eq!(r.iterations, 3);
    }
}
