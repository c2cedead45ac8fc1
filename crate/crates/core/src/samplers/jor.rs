//! The Jones–Osipov–Rokhlin randomized orthogonal transform.
//!
//! `Θ = (Q₁P₁)⋯(Q_{M1}P_{M1}) · F · (Q'₁P'₁)⋯(Q'_{M2}P'_{M2})`, applied to a
//! vector from the right. Each `P` is a uniform permutation, each `Q` a sweep
//! of rotations in consecutive coordinate planes, and `F` the unitary DFT on
//! the complexified coordinate pairs.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rustfft::{Fft, FftPlanner};

use crate::linalg::{GroupElement, Matrix};

/// One `Q·P` factor.
#[derive(Debug, Clone)]
struct RotatedPermutation {
    perm: Vec<usize>,
    /// Angle of the rotation in plane `(l, l+1)`, applied in order `l = 0, 1, …`.
    angles: Vec<(f64, f64)>,
    perm_sign: i8,
}

impl RotatedPermutation {
    fn sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let angles = (0..n.saturating_sub(1))
            .map(|_| (rng.random::<f64>() * TAU).sin_cos())
            .collect();
        let perm_sign = permutation_sign(&perm);
        Self {
            perm,
            angles,
            perm_sign,
        }
    }

    fn apply(&self, v: &mut [f64], scratch: &mut [f64]) {
        for (s, &p) in scratch.iter_mut().zip(&self.perm) {
            *s = v[p];
        }
        v.copy_from_slice(scratch);
        for (l, &(s, c)) in self.angles.iter().enumerate() {
            let a = v[l];
            let b = v[l + 1];
            v[l] = c * a + s * b;
            v[l + 1] = -s * a + c * b;
        }
    }
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// A sampled JOR transform in operator form.
#[derive(Clone)]
pub struct JorOperator {
    n: usize,
    left: Vec<RotatedPermutation>,
    right: Vec<RotatedPermutation>,
    fft: Option<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for JorOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JorOperator")
            .field("n", &self.n)
            .field("m1", &self.left.len())
            .field("m2", &self.right.len())
            .finish()
    }
}

impl JorOperator {
    /// Samples the `M1` left factors first, then the `M2` right factors.
    pub fn sample<R: Rng + ?Sized>(n: usize, m1: usize, m2: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "dimension must be positive");
        let left = (0..m1).map(|_| RotatedPermutation::sample(n, rng)).collect();
        let right = (0..m2).map(|_| RotatedPermutation::sample(n, rng)).collect();
        let d = n / 2;
        let fft = (d > 0).then(|| FftPlanner::new().plan_fft_forward(d));
        Self {
            n,
            left,
            right,
            fft,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Determinant of Θ: the DFT block and the rotations have determinant 1.
    pub fn det_sign(&self) -> i8 {
        self.left
            .iter()
            .chain(&self.right)
            .map(|f| f.perm_sign)
            .product()
    }

    fn apply_f(&self, v: &mut [f64], buf: &mut Vec<Complex64>) {
        let Some(fft) = &self.fft else { return };
        let d = self.n / 2;
        buf.clear();
        buf.extend((0..d).map(|l| Complex64::new(v[2 * l], v[2 * l + 1])));
        fft.process(buf);
        let scale = 1.0 / (d as f64).sqrt();
        for (l, z) in buf.iter().enumerate() {
            v[2 * l] = z.re * scale;
            v[2 * l + 1] = z.im * scale;
        }
    }

    /// Applies Θ to `v` in place in `O(n(log n + M1 + M2))`.
    pub fn apply(&self, v: &mut [f64]) {
        assert_eq!(v.len(), self.n);
        let mut scratch = vec![0.0; self.n];
        let mut buf = Vec::with_capacity(self.n / 2);
        self.apply_with(v, &mut scratch, &mut buf);
    }

    fn apply_with(&self, v: &mut [f64], scratch: &mut [f64], buf: &mut Vec<Complex64>) {
        for f in self.right.iter().rev() {
            f.apply(v, scratch);
        }
        self.apply_f(v, buf);
        for f in self.left.iter().rev() {
            f.apply(v, scratch);
        }
    }

    /// Materializes Θ by applying it to each identity column.
    pub fn to_matrix(&self) -> Matrix {
        let n = self.n;
        let mut m = Matrix::zeros(n, n);
        let mut col = vec![0.0; n];
        let mut scratch = vec![0.0; n];
        let mut buf = Vec::with_capacity(n / 2);
        for j in 0..n {
            col.fill(0.0);
            col[j] = 1.0;
            self.apply_with(&mut col, &mut scratch, &mut buf);
            m.set_column(j, &col);
        }
        m
    }

    pub fn to_group_element(&self) -> GroupElement {
        GroupElement::new_unchecked(self.to_matrix(), self.det_sign())
    }
}

/// Samples Θ with `M1` left and `M2` right factors.
pub fn jor_transform<R: Rng + ?Sized>(n: usize, m1: usize, m2: usize, rng: &mut R) -> GroupElement {
    JorOperator::sample(n, m1, m2, rng).to_group_element()
}

/// Maps a determinant −1 element into SO(n): `−g` for odd `n`, otherwise the
/// first column is negated.
pub fn project_to_special(g: GroupElement) -> GroupElement {
    if g.det_sign() > 0 {
        return g;
    }
    let n = g.dim();
    let mut m = g.into_matrix();
    if n % 2 == 1 {
        m.scale(-1.0);
    } else {
        for i in 0..n {
            m[(i, 0)] = -m[(i, 0)];
        }
    }
    GroupElement::new_unchecked(m, 1)
}
