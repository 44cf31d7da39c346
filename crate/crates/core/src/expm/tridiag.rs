//! Eigendecomposition of small symmetric tridiagonal matrices by implicit QL
//! with Wilkinson-style shifts (the EISPACK `tql2` scheme).

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Eigenpairs of a symmetric tridiagonal matrix.
#[derive(Clone, Debug)]
pub struct TridiagEigen {
    /// Eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Row-major `n x n`; column `k` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<f64>,
}

impl TridiagEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector_entry(&self, row: usize, col: usize) -> f64 {
        self.vectors[row * self.dim() + col]
    }
}

/// `diag` has length `n`, `off` has length `n - 1` (`off[i]` couples `i` and `i + 1`).
pub fn tridiag_eigen(diag: &[f64], off: &[f64]) -> Result<TridiagEigen> {
    let n = diag.len();
    if n == 0 {
        return Ok(TridiagEigen { values: Vec::new(), vectors: Vec::new() });
    }
    if off.len() + 1 != n {
        return Err(Error::param("off-diagonal must have length n - 1"));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    let mut shift_total = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > f64::EPSILON * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::Numerical("tridiagonal QL did not converge".into()));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                shift_total += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zi1 = z[k * n + i + 1];
                        let zi = z[k * n + i];
                        z[k * n + i + 1] = s * zi + c * zi1;
                        z[k * n + i] = c * zi - s * zi1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= f64::EPSILON * tst1 {
                    break;
                }
            }
        }
        d[l] += shift_total;
        e[l] = 0.0;
    }
    if d.iter().chain(z.iter()).any(|x| !x.is_finite()) {
        return Err(Error::Numerical("non-finite eigenpair".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + new_col] = z[row * n + old_col];
        }
    }
    Ok(TridiagEigen { values, vectors })
}

/// `exp(tau T) e_1` for the tridiagonal `T`.
pub fn expm_tridiag_first_column(diag: &[f64], off: &[f64], tau: f64) -> Result<Vec<f64>> {
    let eig = tridiag_eigen(diag, off)?;
    let n = eig.dim();
    let weights: Vec<f64> = (0..n)
        .map(|k| (tau * eig.values[k]).exp() * eig.vector_entry(0, k))
        .collect();
    let out: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|k| eig.vector_entry(i, k) * weights[k]).sum())
        .collect();
    if out.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("exp(T) overflowed".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(diag: &[f64], off: &[f64]) -> f64 {
        let eig = tridiag_eigen(diag, off).unwrap();
        let n = diag.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let t = if i == j {
                    diag[i]
                } else if i + 1 == j {
                    off[i]
                } else if j + 1 == i {
                    off[j]
                } else {
                    0.0
                };
                let r: f64 = (0..n)
                    .map(|k| eig.vector_entry(i, k) * eig.values[k] * eig.vector_entry(j, k))
                    .sum();
                worst = worst.max((r - t).abs());
            }
        }
        worst
    }

    #[test]
    fn two_by_two() {
        let eig = tridiag_eigen(&[0.0, 0.0], &[1.0]).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15);
        assert!((eig.values[1] - 1.0).abs() < 1e-15);
        let col = expm_tridiag_first_column(&[0.0, 0.0], &[1.0], 1.0).unwrap();
        assert!((col[0] - 1f64.cosh()).abs() < 1e-14);
        assert!((col[1] - 1f64.sinh()).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_random_tridiagonals() {
        let mut rng = crate::rng::SeededRng::new(17);
        for n in [1usize, 2, 3, 7, 30] {
            let diag: Vec<f64> = (0..n).map(|_| 10.0 * rng.next_f64() - 5.0).collect();
            let off: Vec<f64> = (0..n.saturating_sub(1)).map(|_| 4.0 * rng.next_f64()).collect();
            assert!(reconstruct(&diag, &off) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn handles_zero_couplings() {
        let eig = tridiag_eigen(&[3.0, 1.0, 2.0], &[0.0, 0.0]).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn length_mismatch() {
        assert!(tridiag_eigen(&[1.0, 2.0], &[]).is_err());
    }
}
