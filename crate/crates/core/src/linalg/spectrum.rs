use serde::{Deserialize, Serialize};

use super::eigen::EigenWorkspace;
use super::group::GroupElement;
use super::matrix::{dot, Matrix};
use crate::error::{Error, Result};

/// Default bound on the difference between the two copies of each cosine.
pub const PAIRING_TOL: f64 = 1e-6;

/// Eigenvalue cosines `cos θ_i` of an orthogonal matrix, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosSpectrum {
    pub x: Vec<f64>,
    pub source_det: i8,
    /// Dimension of the matrix the spectrum came from.
    pub dim: usize,
}

impl CosSpectrum {
    /// Builds a spectrum from arbitrary cosines; sorts and clamps into `[-1, 1]`.
    pub fn from_cosines(mut x: Vec<f64>, source_det: i8, dim: usize) -> Self {
        for v in &mut x {
            *v = v.clamp(-1.0, 1.0);
        }
        x.sort_unstable_by(|a, b| b.total_cmp(a));
        Self { x, source_det, dim }
    }

    /// Spectrum of the identity of `SO(2m+1)`.
    pub fn identity_b(m: usize) -> Self {
        Self {
            x: vec![1.0; m],
            source_det: 1,
            dim: 2 * m + 1,
        }
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.x.len()
    }

    /// Eigen-angles in `[0, π]`.
    pub fn angles(&self) -> Vec<f64> {
        self.x.iter().map(|c| c.acos()).collect()
    }

    /// Trace of the source matrix reconstructed from the cosines.
    pub fn trace(&self) -> f64 {
        let forced = forced_eigenvalue_sum(self.dim, self.source_det);
        forced + 2.0 * self.x.iter().sum::<f64>()
    }
}

/// Sum of the eigenvalues not paired as `e^{±iθ}`.
pub(crate) fn forced_eigenvalue_sum(dim: usize, det: i8) -> f64 {
    match (dim % 2 == 1, det > 0) {
        (true, true) => 1.0,
        (true, false) => -1.0,
        (false, true) => 0.0,
        (false, false) => 0.0,
    }
}

/// Cosine spectrum of a real orthogonal matrix from its symmetric part.
pub fn cos_spectrum(g: &GroupElement) -> Result<CosSpectrum> {
    let n = g.dim();
    let mut ws = EigenWorkspace::new(n);
    cos_spectrum_with(g.matrix(), g.det_sign(), PAIRING_TOL, &mut ws)
}

/// Cosine spectrum of `g · hᵀ`.
pub fn relative_spectrum(g: &GroupElement, h: &GroupElement) -> Result<CosSpectrum> {
    if g.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: h.dim(),
        });
    }
    let mut ws = EigenWorkspace::new(g.dim());
    relative_spectrum_with(g, h, PAIRING_TOL, &mut ws)
}

/// Workspace form of [`relative_spectrum`] for hot loops.
pub fn relative_spectrum_with(
    g: &GroupElement,
    h: &GroupElement,
    pairing_tol: f64,
    ws: &mut EigenWorkspace,
) -> Result<CosSpectrum> {
    let n = g.dim();
    if n != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: h.dim(),
        });
    }
    let (gm, hm) = (g.matrix(), h.matrix());
    let buf = ws.load(n);
    // lower triangle of the symmetric part of g hᵀ
    for i in 0..n {
        for j in 0..=i {
            let a = dot(gm.row(i), hm.row(j));
            let b = if i == j { a } else { dot(gm.row(j), hm.row(i)) };
            buf[i * n + j] = 0.5 * (a + b);
        }
    }
    let det = g.det_sign() * h.det_sign();
    let vals = ws.solve(n)?;
    pair_eigenvalues(vals, n, det, pairing_tol)
}

/// Workspace form of [`cos_spectrum`].
pub fn cos_spectrum_with(
    m: &Matrix,
    det: i8,
    pairing_tol: f64,
    ws: &mut EigenWorkspace,
) -> Result<CosSpectrum> {
    let n = m.rows();
    let buf = ws.load(n);
    for i in 0..n {
        for j in 0..=i {
            buf[i * n + j] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    let vals = ws.solve(n)?;
    pair_eigenvalues(vals, n, det, pairing_tol)
}

/// Drops the forced real eigenvalues and averages the remaining pairs.
fn pair_eigenvalues(sorted: &[f64], n: usize, det: i8, tol: f64) -> Result<CosSpectrum> {
    let odd = n % 2 == 1;
    let kept: &[f64] = match (odd, det > 0) {
        (true, true) => &sorted[1..],
        (true, false) => &sorted[..n - 1],
        (false, true) => sorted,
        (false, false) => &sorted[1..n - 1],
    };
    let mut x = Vec::with_capacity(kept.len() / 2);
    for (index, pair) in kept.chunks_exact(2).enumerate() {
        let gap = (pair[0] - pair[1]).abs();
        if gap > tol {
            return Err(Error::PairingFailure { index, gap, tol });
        }
        x.push((0.5 * (pair[0] + pair[1])).clamp(-1.0, 1.0));
    }
    Ok(CosSpectrum {
        x,
        source_det: det,
        dim: n,
    })
}
