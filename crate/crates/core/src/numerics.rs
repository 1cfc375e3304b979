//! Dense numerical kernels sized for desk-scale graphs: symmetric
//! eigendecomposition, null-space extraction, determinants over real or
//! complex entries, and orthonormalization under a caller-supplied inner
//! product.
//!
//! Everything here is deterministic: fixed sweep orders, stable sorts, and a
//! fixed sign convention (the entry of largest magnitude in each vector is
//! made positive) so downstream output is reproducible byte for byte.

use ndarray::{Array1, Array2};
use num_complex::ComplexFloat;
use thiserror::Error;

use crate::graph::InteriorGraph;

/// Default relative tolerance used across the crate.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("matrix is not symmetric: |a[{i},{j}] - a[{j},{i}]| = {delta:e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },
    #[error("{algorithm} did not converge within {limit} sweeps")]
    NoConvergence {
        algorithm: &'static str,
        limit: usize,
    },
    #[error("eigenpair residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
}

/// Full symmetric eigendecomposition; eigenvalues sorted descending,
/// eigenvectors as matching orthonormal columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Array2<f64>,
}

impl EigenDecomposition {
    /// Eigenvector for `eigenvalues[k]`.
    pub fn vector(&self, k: usize) -> Array1<f64> {
        self.eigenvectors.column(k).to_owned()
    }
}

/// Eigenpair of a row-normalized adjacency matrix.
#[derive(Debug, Clone)]
pub struct RwEigenpair {
    pub lambda: f64,
    pub vector: Array1<f64>,
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// `tol` bounds the accepted input asymmetry (relative to the largest entry)
/// and the per-pair residual; iteration itself runs to machine precision.
pub fn sym_eig(a: &Array2<f64>, tol: f64) -> Result<EigenDecomposition, NumericsError> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "sym_eig needs a square matrix");

    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for i in 0..n {
        for j in (i + 1)..n {
            let delta = (a[[i, j]] - a[[j, i]]).abs();
            if delta > tol * scale.max(1.0) {
                return Err(NumericsError::NotSymmetric { i, j, delta });
            }
        }
    }

    // Work on a symmetrized flat copy; accumulate rotations in v.
    let mut m = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (a[[i, j]] + a[[j, i]]);
        }
    }
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    const MAX_SWEEPS: usize = 100;
    let frob: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-15 * frob.max(f64::MIN_POSITIVE);
    let mut converged = n <= 1 || frob == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = m[i * n + p];
                    let aiq = m[i * n + q];
                    let new_p = c * aip - s * aiq;
                    let new_q = s * aip + c * aiq;
                    m[i * n + p] = new_p;
                    m[p * n + i] = new_p;
                    m[i * n + q] = new_q;
                    m[q * n + i] = new_q;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    if !converged {
        // One last check: the final sweep may have finished the job.
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() > target {
            return Err(NumericsError::NoConvergence {
                algorithm: "jacobi eigendecomposition",
                limit: MAX_SWEEPS,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].total_cmp(&m[i * n + i]));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Array2::zeros((n, n));
    for (k, &src) in order.iter().enumerate() {
        eigenvalues.push(m[src * n + src]);
        let mut column: Vec<f64> = (0..n).map(|i| v[i * n + src]).collect();
        fix_sign(&mut column);
        for (i, &x) in column.iter().enumerate() {
            eigenvectors[[i, k]] = x;
        }
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Flips `x` so its entry of largest magnitude (first such index on ties) is
/// nonnegative.
pub(crate) fn fix_sign(x: &mut [f64]) {
    let mut best = 0usize;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[best].abs() {
            best = i;
        }
    }
    if !x.is_empty() && x[best] < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

/// Eigenpairs of the row-normalized interior adjacency, descending by
/// eigenvalue, with unit-norm vertex vectors.
pub fn rw_eig(g: &InteriorGraph, tol: f64) -> Result<Vec<RwEigenpair>, crate::Error> {
    let degrees: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
    if let Some(v) = degrees.iter().position(|&d| d == 0) {
        return Err(crate::graph::GraphError::IsolatedInteriorVertex {
            id: g.external_id(v),
        }
        .into());
    }
    rw_eig_weighted(g, &degrees, tol)
}

/// Like [`rw_eig`] but normalizing by parent-graph degrees, so stripped
/// pendant edges still weigh on their attachment vertices. This is the
/// propagation matrix for graphs with a pinned boundary.
pub fn rw_eig_dirichlet(g: &InteriorGraph, tol: f64) -> Result<Vec<RwEigenpair>, crate::Error> {
    let degrees: Vec<usize> = (0..g.vertex_count()).map(|v| g.full_degree(v)).collect();
    rw_eig_weighted(g, &degrees, tol)
}

/// Eigenpairs of `D^{-1} A` obtained through the symmetric similarity
/// `D^{-1/2} A D^{-1/2}`; `A` is the interior adjacency and `D` the supplied
/// positive degrees.
fn rw_eig_weighted(
    g: &InteriorGraph,
    degrees: &[usize],
    tol: f64,
) -> Result<Vec<RwEigenpair>, crate::Error> {
    let n = g.vertex_count();
    let a = g.adjacency();
    let inv_sqrt: Vec<f64> = degrees.iter().map(|&d| 1.0 / (d as f64).sqrt()).collect();

    let mut sym = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let x = a[[i, j]] * inv_sqrt[i] * inv_sqrt[j];
            sym[[i, j]] = x;
            sym[[j, i]] = x;
        }
    }

    let decomposition = sym_eig(&sym, tol)?;
    let rn = Array2::from_shape_fn((n, n), |(i, j)| a[[i, j]] / degrees[i] as f64);

    let mut pairs = Vec::with_capacity(n);
    for (k, &lambda) in decomposition.eigenvalues.iter().enumerate() {
        let mut vector: Vec<f64> = (0..n)
            .map(|i| decomposition.eigenvectors[[i, k]] * inv_sqrt[i])
            .collect();
        let norm: f64 = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
        vector.iter_mut().for_each(|x| *x /= norm);
        fix_sign(&mut vector);
        let vector = Array1::from_vec(vector);

        let residual = rn
            .dot(&vector)
            .iter()
            .zip(vector.iter())
            .fold(0.0f64, |m, (ax, x)| m.max((ax - lambda * x).abs()));
        if residual > tol.max(1e-12) {
            return Err(NumericsError::ResidualTooLarge { residual, tol }.into());
        }
        pairs.push(RwEigenpair { lambda, vector });
    }
    Ok(pairs)
}

/// Orthonormal basis of `{x : Ax = 0}` by one-sided Jacobi SVD; a singular
/// value counts as zero when `sigma <= tol * sigma_max`. A matrix with no
/// rows annihilates everything, so the basis is the full column space.
pub fn nullspace(a: &Array2<f64>, tol: f64) -> Result<Vec<Array1<f64>>, NumericsError> {
    let (rows, cols) = (a.nrows(), a.ncols());
    if cols == 0 {
        return Ok(Vec::new());
    }

    // Column-major working copy and accumulated right rotations.
    let mut b: Vec<Vec<f64>> = (0..cols).map(|j| a.column(j).to_vec()).collect();
    let mut v = vec![vec![0.0f64; cols]; cols];
    for (j, column) in v.iter_mut().enumerate() {
        column[j] = 1.0;
    }

    const MAX_SWEEPS: usize = 60;
    // Right rotations keep the Frobenius norm, so the initial scale is a
    // stable floor: columns ground down to rounding noise are left alone
    // (their accumulated rotation vectors are already valid null vectors).
    let frob: f64 = b.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let floor = 1e-14 * frob;
    let mut clean_sweep = rows == 0 || cols == 1;
    for _ in 0..MAX_SWEEPS {
        if clean_sweep {
            break;
        }
        clean_sweep = true;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = b[p].iter().map(|x| x * x).sum();
                let beta: f64 = b[q].iter().map(|x| x * x).sum();
                if alpha.sqrt() <= floor || beta.sqrt() <= floor {
                    continue;
                }
                let gamma: f64 = b[p].iter().zip(&b[q]).map(|(x, y)| x * y).sum();
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                clean_sweep = false;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let bp = b[p][i];
                    let bq = b[q][i];
                    b[p][i] = c * bp - s * bq;
                    b[q][i] = s * bp + c * bq;
                }
                for i in 0..cols {
                    let vp = v[p][i];
                    let vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
    }
    if !clean_sweep {
        return Err(NumericsError::NoConvergence {
            algorithm: "one-sided jacobi svd",
            limit: MAX_SWEEPS,
        });
    }

    let sigmas: Vec<f64> = b
        .iter()
        .map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let sigma_max = sigmas.iter().fold(0.0f64, |m, &s| m.max(s));

    let mut selected: Vec<usize> = (0..cols)
        .filter(|&j| sigmas[j] <= tol * sigma_max)
        .collect();
    selected.sort_by(|&i, &j| sigmas[i].total_cmp(&sigmas[j]));

    Ok(selected
        .into_iter()
        .map(|j| {
            let mut column = v[j].clone();
            fix_sign(&mut column);
            Array1::from_vec(column)
        })
        .collect())
}

/// Determinant by LU elimination with partial pivoting, over real or complex
/// entries; a pivot below `tol * max|a_ij|` reports an exact zero.
pub fn determinant<T: ComplexFloat<Real = f64>>(a: &Array2<T>, tol: f64) -> T {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "determinant needs a square matrix");
    if n == 0 {
        return T::one();
    }
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return T::zero();
    }

    let mut m: Vec<T> = a.iter().copied().collect();
    let mut det = T::one();
    for k in 0..n {
        let mut pivot_row = k;
        for i in (k + 1)..n {
            if m[i * n + k].abs() > m[pivot_row * n + k].abs() {
                pivot_row = i;
            }
        }
        if m[pivot_row * n + k].abs() <= tol * scale {
            return T::zero();
        }
        if pivot_row != k {
            for j in 0..n {
                m.swap(k * n + j, pivot_row * n + j);
            }
            det = -det;
        }
        let pivot = m[k * n + k];
        det = det * pivot;
        for i in (k + 1)..n {
            let factor = m[i * n + k] / pivot;
            for j in (k + 1)..n {
                let sub = factor * m[k * n + j];
                m[i * n + j] = m[i * n + j] - sub;
            }
        }
    }
    det
}

/// Orthonormalization result; `dropped` holds input indices eliminated as
/// dependent on their predecessors.
#[derive(Debug, Clone)]
pub struct GramSchmidt {
    pub basis: Vec<Vec<f64>>,
    pub dropped: Vec<usize>,
}

/// Modified Gram-Schmidt with one re-orthogonalization pass, under an
/// arbitrary symmetric positive-definite inner product. A vector whose
/// orthogonal remainder has norm `<= tol` times its own norm is dropped.
pub fn gram_schmidt(
    vectors: &[Vec<f64>],
    inner: impl Fn(&[f64], &[f64]) -> f64,
    tol: f64,
) -> GramSchmidt {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut dropped = Vec::new();
    for (index, vector) in vectors.iter().enumerate() {
        let original_norm = inner(vector, vector).max(0.0).sqrt();
        let mut w = vector.clone();
        // Two passes keep orthogonality near machine precision even when the
        // input is strongly correlated with the accumulated basis.
        for _ in 0..2 {
            for b in &basis {
                let coefficient = inner(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= coefficient * y);
            }
        }
        let norm = inner(&w, &w).max(0.0).sqrt();
        if norm <= tol * original_norm || norm == 0.0 {
            dropped.push(index);
            continue;
        }
        w.iter_mut().for_each(|x| *x /= norm);
        basis.push(w);
    }
    GramSchmidt { basis, dropped }
}

/// Eigenvalues only, sorted ascending, via Householder tridiagonalization and
/// implicit-shift QL. Quadratically cheaper in memory traffic than the full
/// Jacobi path; used for the large finite-difference matrices.
pub(crate) fn sym_eigenvalues_ascending(
    a: Array2<f64>,
) -> Result<Vec<f64>, NumericsError> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigenvalues need a square matrix");
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut m: Vec<f64> = a.iter().copied().collect();
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];

    // Householder reduction to tridiagonal form, no eigenvector accumulation.
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0f64;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| m[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = m[i * n + l];
            } else {
                for k in 0..=l {
                    m[i * n + k] /= scale;
                    h += m[i * n + k] * m[i * n + k];
                }
                let f = m[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                m[i * n + l] = f - g;
                let mut f_acc = 0.0f64;
                for j in 0..=l {
                    let mut g_acc = 0.0f64;
                    for k in 0..=j {
                        g_acc += m[j * n + k] * m[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g_acc += m[k * n + j] * m[i * n + k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * m[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = m[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        m[j * n + k] -= f * e[k] + g * m[i * n + k];
                    }
                }
            }
        } else {
            e[i] = m[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = m[i * n + i];
    }

    // Implicit-shift QL on the tridiagonal (d, e).
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    const MAX_ITER: usize = 50;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m_idx = l;
            while m_idx + 1 < n {
                let dd = d[m_idx].abs() + d[m_idx + 1].abs();
                if e[m_idx].abs() <= f64::EPSILON * dd {
                    break;
                }
                m_idx += 1;
            }
            if m_idx == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_ITER {
                return Err(NumericsError::NoConvergence {
                    algorithm: "ql eigenvalue iteration",
                    limit: MAX_ITER,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let denom = g + if g >= 0.0 { r.abs() } else { -r.abs() };
            g = d[m_idx] - d[l] + e[l] / denom;
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflowed = false;
            for i in (l..m_idx).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m_idx] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m_idx] = 0.0;
        }
    }

    d.sort_by(f64::total_cmp);
    Ok(d)
}
