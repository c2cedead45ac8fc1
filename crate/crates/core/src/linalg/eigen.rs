//! Symmetric eigensolvers: Householder tridiagonalization followed by implicit
//! QL for eigenvalues, and a cyclic Jacobi solver with eigenvectors used as an
//! independent check.

use super::matrix::{dot, Matrix};
use crate::error::{Error, Result};

const QL_MAX_ITER: usize = 60;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Reusable buffers for repeated eigenvalue calls of the same size.
#[derive(Debug, Clone, Default)]
pub struct EigenWorkspace {
    a: Vec<f64>,
    d: Vec<f64>,
    e: Vec<f64>,
    scratch: Vec<f64>,
}

impl EigenWorkspace {
    pub fn new(n: usize) -> Self {
        Self {
            a: vec![0.0; n * n],
            d: vec![0.0; n],
            e: vec![0.0; n],
            scratch: vec![0.0; 2 * n],
        }
    }

    /// Loads the matrix into the workspace and returns its row-major buffer.
    pub fn load(&mut self, n: usize) -> &mut [f64] {
        self.a.resize(n * n, 0.0);
        self.d.resize(n, 0.0);
        self.e.resize(n, 0.0);
        self.scratch.resize(2 * n, 0.0);
        &mut self.a
    }

    /// Eigenvalues of the loaded symmetric matrix, sorted descending.
    /// Only the lower triangle is read.
    pub fn solve(&mut self, n: usize) -> Result<&[f64]> {
        tridiagonalize(&mut self.a, n, &mut self.d, &mut self.e, &mut self.scratch);
        tql(&mut self.d, &mut self.e)?;
        self.d.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(&self.d)
    }
}

/// Eigenvalues of a symmetric matrix sorted descending.
pub fn symmetric_eigenvalues(s: &Matrix, tol: f64) -> Result<Vec<f64>> {
    check_symmetric(s, tol)?;
    let n = s.rows();
    let mut ws = EigenWorkspace::new(n);
    ws.load(n).copy_from_slice(s.as_slice());
    let vals = ws.solve(n)?.to_vec();
    if cfg!(debug_assertions) && n <= 12 {
        let (jv, q) = jacobi_eigen(s)?;
        let recon = reconstruct(&q, &jv);
        let scale = s.max_abs().max(f64::MIN_POSITIVE);
        debug_assert!(
            recon.max_abs_diff(s) <= 1e-10 * scale.max(1.0),
            "eigen reconstruction check failed"
        );
    }
    Ok(vals)
}

fn check_symmetric(s: &Matrix, tol: f64) -> Result<()> {
    if !s.is_square() {
        return Err(Error::NonSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    let asym = s.asymmetry();
    if asym > tol {
        return Err(Error::NotSymmetric {
            asymmetry: asym,
            tol,
        });
    }
    Ok(())
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// On return `d` holds the diagonal and `e[1..]` the subdiagonal.
fn tridiagonalize(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64], scratch: &mut [f64]) {
    if n == 0 {
        return;
    }
    for i in 0..n {
        for j in 0..i {
            a[j * n + i] = a[i * n + j];
        }
    }
    let (v, w) = scratch.split_at_mut(n);
    e[0] = 0.0;
    for k in 0..n.saturating_sub(2) {
        let m = k + 1;
        let len = n - m;
        let x0 = a[k * n + m];
        let tail: f64 = a[k * n + m + 1..k * n + n].iter().map(|x| x * x).sum();
        d[k] = a[k * n + k];
        if tail == 0.0 {
            e[m] = x0;
            continue;
        }
        let norm = (x0 * x0 + tail).sqrt();
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let v = &mut v[..len];
        v.copy_from_slice(&a[k * n + m..k * n + n]);
        v[0] = x0 - alpha;
        let beta = 2.0 / (v[0] * v[0] + tail);
        // p = β A₂₂ v, then w = p − (β/2)(pᵀv) v
        let w = &mut w[..len];
        for i in 0..len {
            let row = (m + i) * n + m;
            w[i] = beta * dot(&a[row..row + len], v);
        }
        let kk = 0.5 * beta * dot(w, v);
        for (wi, vi) in w.iter_mut().zip(v.iter()) {
            *wi -= kk * vi;
        }
        for i in 0..len {
            let (vi, wi) = (v[i], w[i]);
            let row = (m + i) * n + m;
            for ((aij, vj), wj) in a[row..row + len].iter_mut().zip(v.iter()).zip(w.iter()) {
                *aij -= vi * wj + wi * vj;
            }
        }
        e[m] = alpha;
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 1] = a[(n - 2) * n + n - 1];
    }
    d[n - 1] = a[n * n - 1];
}

/// `√(a² + b²)`, falling back to the scaled libm routine when squaring could
/// overflow or underflow.
#[inline]
fn fast_hypot(a: f64, b: f64) -> f64 {
    let s = a * a + b * b;
    if s.is_finite() && s > 1e-280 {
        s.sqrt()
    } else {
        a.hypot(b)
    }
}

/// Implicit QL iteration on a symmetric tridiagonal matrix.
fn tql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::NoConvergence { iterations: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = fast_hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = fast_hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                let inv = 1.0 / r;
                s = f * inv;
                c = g * inv;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Cyclic Jacobi eigen-decomposition. Returns eigenvalues sorted descending and
/// the matching orthonormal eigenvectors as columns.
pub fn jacobi_eigen(s: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = s.rows();
    let mut a = s.clone();
    let mut v = Matrix::identity(n);
    let mut sweeps = 0;
    loop {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let total: f64 = a.as_slice().iter().map(|x| x * x).sum();
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) || off == 0.0 {
            break;
        }
        sweeps += 1;
        if sweeps > JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { iterations: sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let vals = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vecs = Matrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        vecs.set_column(new, &v.column(old));
    }
    Ok((vals, vecs))
}

/// `Q diag(vals) Q^T`.
pub fn reconstruct(q: &Matrix, vals: &[f64]) -> Matrix {
    let n = q.rows();
    let mut scaled = q.clone();
    for i in 0..n {
        for (j, &l) in vals.iter().enumerate() {
            scaled[(i, j)] *= l;
        }
    }
    scaled.matmul_transpose(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize, seed: u64) -> Matrix {
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = next();
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    #[test]
    fn diagonal_and_two_by_two() {
        let d = Matrix::from_diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(symmetric_eigenvalues(&d, 1e-12).unwrap(), vec![3.0, 2.0, 1.0]);
        let s = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let v = symmetric_eigenvalues(&s, 1e-12).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15 && (v[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let s = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]);
        assert!(matches!(
            symmetric_eigenvalues(&s, 1e-12),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn ql_and_jacobi_agree() {
        for seed in 0..5 {
            let s = sym(8, seed);
            let a = symmetric_eigenvalues(&s, 1e-12).unwrap();
            let (b, q) = jacobi_eigen(&s).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
            assert!(reconstruct(&q, &b).max_abs_diff(&s) < 1e-12);
        }
    }

    #[test]
    fn workspace_reuse_gives_same_answer() {
        let s = sym(10, 9);
        let mut ws = EigenWorkspace::new(10);
        ws.load(10).copy_from_slice(s.as_slice());
        let first = ws.solve(10).unwrap().to_vec();
        ws.load(10).copy_from_slice(s.as_slice());
        assert_eq!(first, ws.solve(10).unwrap());
    }
}
