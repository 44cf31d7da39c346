use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph [`expm_dense_oracle`] accepts.
pub const DENSE_LIMIT: usize = 512;

/// Full `e^A` via `A = Q diag(lambda) Q^T`.
pub fn expm_dense_oracle(g: &Graph) -> Result<DMatrix<f64>> {
    let n = g.node_count();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: DENSE_LIMIT,
            hint: "use the Krylov total communicability instead",
        });
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    let eig = SymmetricEigen::try_new(a, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("dense eigensolver did not converge".into()))?;
    let exp_vals = DVector::from_iterator(n, eig.eigenvalues.iter().map(|l| l.exp()));
    let q = &eig.eigenvectors;
    let mut out = q * DMatrix::from_diagonal(&exp_vals) * q.transpose();
    for i in 0..n {
        for j in i + 1..n {
            // e^A is entrywise nonnegative for a 0/1 adjacency matrix
            let s = (0.5 * (out[(i, j)] + out[(j, i)])).max(0.0);
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::clique;

    #[test]
    fn empty_graph_gives_identity() {
        let e = expm_dense_oracle(&Graph::empty(3)).unwrap();
        assert_eq!(e, DMatrix::identity(3, 3));
    }

    #[test]
    fn single_edge_closed_form() {
        let e = expm_dense_oracle(&clique(2).unwrap().to_graph()).unwrap();
        let (c, s) = (1f64.cosh(), 1f64.sinh());
        assert!((e[(0, 0)] - c).abs() < 1e-14 && (e[(1, 1)] - c).abs() < 1e-14);
        assert!((e[(0, 1)] - s).abs() < 1e-14 && (e[(1, 0)] - s).abs() < 1e-14);
    }

    #[test]
    fn refuses_large_graphs() {
        assert!(matches!(
            expm_dense_oracle(&Graph::empty(DENSE_LIMIT + 1)),
            Err(Error::TooLarge { .. })
        ));
    }
}
