use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{GroupElement, Matrix};

/// Haar-distributed element of SO(n) from the QR factorization of a Gaussian matrix.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GroupElement {
    assert!(n >= 1, "dimension must be positive");
    let mut a = Matrix::zeros(n, n);
    for v in a.as_mut_slice() {
        *v = rng.sample(StandardNormal);
    }
    let mut q = Matrix::identity(n);
    let mut v = vec![0.0; n];
    let mut r_diag = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let norm = (k..n).map(|i| a[(i, k)] * a[(i, k)]).sum::<f64>().sqrt();
        let x0 = a[(k, k)];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        r_diag[k] = alpha;
        let len = n - k;
        v[..len].copy_from_slice(&a.column(k)[k..]);
        v[0] -= alpha;
        let vnorm = v[..len].iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut v[..len] {
            *x /= vnorm;
        }
        // A <- H A on the trailing block
        for j in k..n {
            let s: f64 = (0..len).map(|i| v[i] * a[(k + i, j)]).sum();
            for i in 0..len {
                a[(k + i, j)] -= 2.0 * s * v[i];
            }
        }
        // Q <- Q H
        for i in 0..n {
            let s: f64 = (0..len).map(|t| q[(i, k + t)] * v[t]).sum();
            for t in 0..len {
                q[(i, k + t)] -= 2.0 * s * v[t];
            }
        }
    }
    r_diag[n - 1] = a[(n - 1, n - 1)];
    // n-1 reflectors give det Q = (-1)^(n-1)
    let mut det: i8 = if (n - 1).is_multiple_of(2) { 1 } else { -1 };
    for (j, &r) in r_diag.iter().enumerate() {
        if r < 0.0 {
            det = -det;
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    if det < 0 {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    GroupElement::new_unchecked(q, 1)
}
