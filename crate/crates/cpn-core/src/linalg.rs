//! Small dense real-symmetric eigendecomposition (cyclic Jacobi) and PSD matrix
//! square root. Self-contained and fully deterministic: fixed row-major rotation
//! order, no random pivoting, so identical inputs give identical bytes out.

use crate::error::{CpnError, Result};

/// Maximum asymmetry accepted by [`SymMatrix::from_rows`].
const SYM_TOL: f64 = 1e-12;
/// Convergence threshold for the Jacobi sweep, relative to the input Frobenius norm.
const JACOBI_REL_TOL: f64 = 1e-13;
/// Maximum number of Jacobi sweeps before reporting non-convergence.
const JACOBI_MAX_SWEEPS: usize = 50;
/// Eigenvalues in [−PSD_CLAMP, 0) are treated as roundoff and clamped to zero by
/// [`sqrt_psd`]; anything more negative is a genuine PSD violation.
const PSD_CLAMP: f64 = 1e-10;

/// A real symmetric n×n matrix, stored dense row-major and kept exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Build from explicit rows; rejects non-square input, non-finite entries, and
    /// asymmetry beyond 1e−12, then symmetrizes exactly via (A + Aᵀ)/2.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(CpnError::Numeric("empty matrix".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(CpnError::Numeric(format!(
                    "row {i} has {} entries in a {n}×{n} matrix",
                    r.len()
                )));
            }
            for (j, &x) in r.iter().enumerate() {
                if !x.is_finite() {
                    return Err(CpnError::Numeric(format!("entry ({i}, {j}) is {x}")));
                }
            }
        }
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let d = (rows[i][j] - rows[j][i]).abs();
                if d > SYM_TOL {
                    return Err(CpnError::Numeric(format!(
                        "matrix is not symmetric: |A[{i}][{j}] − A[{j}][{i}]| = {d:e}"
                    )));
                }
                m.data[i * n + j] = 0.5 * (rows[i][j] + rows[j][i]);
            }
        }
        Ok(m)
    }

    /// Build from a generator evaluated on i ≤ j and mirrored, guaranteeing exact
    /// symmetry by construction.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n, "matrix order mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Matrix product, exploiting nothing: returns a plain (generally
    /// non-symmetric) result flattened row-major. Used by reconstruction checks.
    pub fn mul_raw(&self, other: &SymMatrix) -> Vec<f64> {
        let n = self.n;
        assert_eq!(n, other.n, "matrix order mismatch");
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }
}

/// Result of [`sym_eig`]: eigenvalues in descending order with matching
/// orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    n: usize,
    /// Eigenvalues, descending.
    pub values: Vec<f64>,
    /// Row-major n×n matrix whose column j is the eigenvector for `values[j]`.
    vectors: Vec<f64>,
}

impl EigDecomposition {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Entry (i, j) of the eigenvector matrix (component i of eigenvector j).
    pub fn vector_entry(&self, i: usize, j: usize) -> f64 {
        self.vectors[i * self.n + j]
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a real symmetric matrix by the cyclic Jacobi method.
///
/// Sweeps rotate index pairs in fixed row-major (p < q) order until the
/// off-diagonal Frobenius norm falls below 1e−13 times the input norm, failing
/// after 50 sweeps with the residual norm in the error.
pub fn sym_eig(m: &SymMatrix) -> Result<EigDecomposition> {
    let n = m.order();
    let mut a = m.data.clone();
    let mut v = SymMatrix::identity(n).data;
    let norm0 = m.frobenius_norm();

    // The zero matrix (and n = 1) is already diagonal; the relative threshold
    // would be 0 and never strictly exceeded, so short-circuit.
    if norm0 > 0.0 && n > 1 {
        let tol = JACOBI_REL_TOL * norm0;
        let mut converged = off_diagonal_norm(&a, n) < tol;
        let mut sweeps = 0;
        while !converged && sweeps < JACOBI_MAX_SWEEPS {
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let tau = (aqq - app) / (2.0 * apq);
                    // Stable smaller-root tangent.
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // Update the p/q rows and columns of A (keeping exact symmetry).
                    a[p * n + p] = app - t * apq;
                    a[q * n + q] = aqq + t * apq;
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    for k in 0..n {
                        if k == p || k == q {
                            continue;
                        }
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[p * n + k] = a[k * n + p];
                        a[k * n + q] = s * akp + c * akq;
                        a[q * n + k] = a[k * n + q];
                    }
                    // Accumulate the rotation into the eigenvector columns.
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
            sweeps += 1;
            converged = off_diagonal_norm(&a, n) < tol;
        }
        if !converged {
            return Err(CpnError::Numeric(format!(
                "Jacobi eigensolver did not converge after {JACOBI_MAX_SWEEPS} sweeps \
                 (off-diagonal norm {:e}, threshold {:e})",
                off_diagonal_norm(&a, n),
                tol
            )));
        }
    }

    // Sort eigenvalues descending (ties by original index for determinism) and
    // permute the eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[j * n + j]
            .partial_cmp(&a[i * n + i])
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + new_j] = v[i * n + old_j];
        }
    }
    Ok(EigDecomposition { n, values, vectors })
}

/// Symmetric PSD square root: V·diag(√λ)·Vᵀ with eigenvalues in [−1e−10, 0)
/// clamped to zero. Eigenvalues below −1e−10 are a real PSD violation and fail.
pub fn sqrt_psd(m: &SymMatrix) -> Result<SymMatrix> {
    let eig = sym_eig(m)?;
    let n = eig.order();
    let mut roots = Vec::with_capacity(n);
    for &lam in &eig.values {
        if lam < -PSD_CLAMP {
            return Err(CpnError::Numeric(format!(
                "matrix is not positive semidefinite: eigenvalue {lam:e}"
            )));
        }
        roots.push(if lam > 0.0 { lam.sqrt() } else { 0.0 });
    }
    // B_ij = Σ_k V_ik √λ_k V_jk, filled on i ≤ j and mirrored → exactly symmetric.
    Ok(SymMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| eig.vector_entry(i, k) * roots[k] * eig.vector_entry(j, k))
            .sum()
    }))
}
