use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{GroupElement, Matrix};

/// One step of Kac's walk: left-multiplies `m` by a rotation of uniform angle
/// in a uniformly chosen coordinate plane.
pub fn kac_step<R: Rng + ?Sized>(m: &mut Matrix, rng: &mut R) {
    let n = m.rows();
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    let theta = rng.random::<f64>() * TAU;
    rotate_rows(m, i, j, theta);
}

/// Rows `i`, `j` of `m` replaced by `(c r_i − s r_j, s r_i + c r_j)`.
pub fn rotate_rows(m: &mut Matrix, i: usize, j: usize, theta: f64) {
    let (s, c) = theta.sin_cos();
    let n = m.cols();
    for col in 0..n {
        let a = m[(i, col)];
        let b = m[(j, col)];
        m[(i, col)] = c * a - s * b;
        m[(j, col)] = s * a + c * b;
    }
}

/// Product of `k` Kac steps applied to the identity.
pub fn kac_walk<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> GroupElement {
    assert!(n >= 2, "Kac's walk needs n >= 2");
    let mut m = Matrix::identity(n);
    for _ in 0..k {
        kac_step(&mut m, rng);
    }
    GroupElement::new_unchecked(m, 1)
}

/// Uniform unit vector in R^n.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `m <- (I − 2uuᵀ) m` for a unit vector `u`.
pub fn apply_reflection(m: &mut Matrix, u: &[f64]) {
    let n = m.cols();
    let mut w = vec![0.0; n];
    for (r, &ur) in u.iter().enumerate() {
        for (wc, &x) in w.iter_mut().zip(m.row(r)) {
            *wc += ur * x;
        }
    }
    for (r, &ur) in u.iter().enumerate() {
        let f = 2.0 * ur;
        for (x, &wc) in m.row_mut(r).iter_mut().zip(&w) {
            *x -= f * wc;
        }
    }
}

/// Product of `k` uniformly random reflections; determinant `(−1)^k`.
pub fn reflection_walk<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> GroupElement {
    assert!(n >= 1, "dimension must be positive");
    let mut m = Matrix::identity(n);
    for _ in 0..k {
        let u = random_unit_vector(n, rng);
        apply_reflection(&mut m, &u);
    }
    GroupElement::new_unchecked(m, if k.is_multiple_of(2) { 1 } else { -1 })
}

/// Reflection walk with caller-supplied unit vectors.
pub fn reflection_product(n: usize, vectors: &[Vec<f64>]) -> GroupElement {
    let mut m = Matrix::identity(n);
    for u in vectors {
        apply_reflection(&mut m, u);
    }
    let det = if vectors.len().is_multiple_of(2) { 1 } else { -1 };
    GroupElement::new_unchecked(m, det)
}
