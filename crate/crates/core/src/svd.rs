//! Dense SVD with deterministic output: singular values sorted descending
//! and singular-vector signs canonicalized (largest-magnitude component of
//! each left vector made positive).
//!
//! Computed through the symmetric eigendecomposition of the Gram matrix on
//! the smaller side. The bidiagonal SVD in the linear-algebra backend loses
//! several digits on occasional inputs; the symmetric route keeps the sum
//! of squared singular values at the Frobenius norm to machine precision,
//! which the analysis invariants depend on.

use nalgebra::{DMatrix, SymmetricEigen};

pub(crate) struct Svd {
    /// Left singular vectors as columns, `rows x k`, k = min(rows, cols).
    pub u: DMatrix<f64>,
    /// Singular values, non-increasing.
    pub sigma: Vec<f64>,
    /// Right singular vectors as columns, `cols x k`. Columns beyond the
    /// numerical rank are zero.
    pub v: DMatrix<f64>,
}

pub(crate) fn svd(matrix: &DMatrix<f64>) -> Svd {
    let (rows, cols) = matrix.shape();
    let k = rows.min(cols);

    let (mut u, sigma, mut v) = if rows <= cols {
        let gram = matrix * matrix.transpose();
        let (vectors, sigma) = sorted_eigen(gram);
        let mut v = DMatrix::zeros(cols, k);
        let tol = zero_tolerance(&sigma, rows, cols);
        for col in 0..k {
            if sigma[col] > tol {
                let u_col = vectors.column(col);
                let v_col = matrix.transpose() * u_col / sigma[col];
                v.set_column(col, &v_col);
            }
        }
        (vectors, sigma, v)
    } else {
        let gram = matrix.transpose() * matrix;
        let (vectors, sigma) = sorted_eigen(gram);
        let mut u = DMatrix::zeros(rows, k);
        let tol = zero_tolerance(&sigma, rows, cols);
        for col in 0..k {
            if sigma[col] > tol {
                let v_col = vectors.column(col);
                let u_col = matrix * v_col / sigma[col];
                u.set_column(col, &u_col);
            }
        }
        (u, sigma, vectors)
    };

    // Sign rule: dominant component of each left singular vector positive.
    for col in 0..k {
        let mut best = 0usize;
        let mut best_mag = -1.0f64;
        for r in 0..rows {
            let mag = u[(r, col)].abs();
            if mag > best_mag {
                best_mag = mag;
                best = r;
            }
        }
        if u[(best, col)] < 0.0 {
            for r in 0..rows {
                u[(r, col)] = -u[(r, col)];
            }
            for c in 0..cols {
                v[(c, col)] = -v[(c, col)];
            }
        }
    }

    Svd { u, sigma, v }
}

fn zero_tolerance(sigma: &[f64], rows: usize, cols: usize) -> f64 {
    let largest = sigma.first().copied().unwrap_or(0.0);
    largest * rows.max(cols) as f64 * f64::EPSILON.sqrt()
}

/// Eigendecomposition of a symmetric PSD matrix, eigenpairs sorted by
/// descending eigenvalue, returned as (vectors, sqrt(eigenvalues)).
fn sorted_eigen(gram: DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let m = gram.nrows();
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap()
    });
    let mut vectors = DMatrix::zeros(m, m);
    let mut sigma = Vec::with_capacity(m);
    for (dst, &src) in order.iter().enumerate() {
        sigma.push(eig.eigenvalues[src].max(0.0).sqrt());
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vectors, sigma)
}
