//! Determinant kernels on clustered cosines.
//!
//! Dividing `det[E(c_i, d_j)]` by two Vandermonde products loses every digit
//! once cosines crowd together. Within a cluster of close cosines the rows (or
//! columns) are replaced by divided differences over nested prefixes of the
//! cluster, which removes the within-cluster Vandermonde factors exactly. The
//! divided differences come from a bivariate Taylor expansion of the entry
//! around the cluster centres, contracted against complete homogeneous
//! polynomials of the offsets, so they stay accurate down to exact ties.

use std::ops::{Add, Div, Mul, Neg, Range, Sub};

use super::KernelType;
use crate::linalg::dd::DoubleDouble;
use crate::linalg::lu::{log_det_dd_in_place, log_det_in_place};
use crate::linalg::SignedLog;

const MAX_TERMS: usize = 600;

/// Cosines closer than [`cluster_scale`] join a cluster, and a cluster spans
/// at most this multiple of it.
const DIAMETER_FRACTION: f64 = 2.0;

/// Distance from `[−1, 1]` to the nearest pole of an entry in either argument.
pub(crate) fn entry_radius(z: f64) -> f64 {
    (1.0 - z) * (1.0 - z) / (2.0 * z)
}

/// Cluster gap. Moving one argument by this much near ±1 shifts the poles in
/// the other argument by at most half of [`entry_radius`].
pub(crate) fn cluster_scale(z: f64) -> f64 {
    let r = (1.0 - z) / (1.0 + z);
    r * r / 8.0
}

/// Clusters at least this large need double-double: the divided-difference
/// matrix of a tie of this order is too ill-conditioned for `f64`.
pub(crate) const DD_CLUSTER: usize = 8;

/// Splits descending cosines into runs of close neighbours.
pub(crate) fn find_clusters(c: &[f64], z: f64) -> Vec<Range<usize>> {
    let scale = cluster_scale(z);
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=c.len() {
        if i == c.len() || c[i - 1] - c[i] > scale || c[start] - c[i] > DIAMETER_FRACTION * scale {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// `∏_{i<j} (c_i − c_j)` over pairs in different clusters, times
/// `(−1)^{k(k−1)/2}` for each cluster of size `k`: the divisor that goes with
/// the divided-difference matrix.
pub(crate) fn split_vandermonde(c: &[f64], clusters: &[Range<usize>]) -> SignedLog {
    let mut acc = SignedLog::ONE;
    for (a, ra) in clusters.iter().enumerate() {
        if ra.len() % 4 >= 2 {
            acc = acc * SignedLog::new(-1, 0.0);
        }
        for rb in &clusters[a + 1..] {
            for i in ra.clone() {
                for j in rb.clone() {
                    acc = acc * SignedLog::from_f64(c[i] - c[j]);
                }
            }
        }
    }
    acc
}

/// Field operations shared by `f64` and double-double evaluation.
pub(crate) trait Real:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    /// Taylor tail bound relative to the leading term.
    const TAIL: f64;
    fn of(x: f64) -> Self;
    fn entry(kind: KernelType, c: f64, d: f64, z: f64) -> Self;
    fn log_det(a: &mut [Self], n: usize) -> SignedLog;
}

impl Real for f64 {
    const TAIL: f64 = 1e-18;
    fn of(x: f64) -> Self {
        x
    }
    fn entry(kind: KernelType, c: f64, d: f64, z: f64) -> Self {
        super::cauchy::entry(kind, c, d, z)
    }
    fn log_det(a: &mut [Self], n: usize) -> SignedLog {
        log_det_in_place(a, n)
    }
}

impl Real for DoubleDouble {
    const TAIL: f64 = 1e-33;
    fn of(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    fn entry(kind: KernelType, c: f64, d: f64, z: f64) -> Self {
        super::cauchy::entry_dd(kind, c, d, z)
    }
    fn log_det(a: &mut [Self], n: usize) -> SignedLog {
        log_det_dd_in_place(a, n)
    }
}

/// Taylor coefficients `g[a][b]` of the entry around `(p, q)`, for
/// `a ≤ na`, `b ≤ nb`, written row-major with stride `nb + 1`.
///
/// The entry is `F/Q (+ 2 for type D)` with `Q` and `F` polynomials of degree
/// at most two, so the coefficients follow from `Q·G = F` term by term.
fn taylor_into<T: Real>(g: &mut Vec<T>, kind: KernelType, p: f64, q: f64, z: f64, na: usize, nb: usize) {
    let two = T::of(2.0);
    let one = T::of(1.0);
    let zt = T::of(z);
    let (pt, qt) = (T::of(p), T::of(q));
    let omz = one - zt;
    let w = omz * omz;
    let one_m_pq = one - pt * qt;
    let diff = pt - qt;
    let four_z = T::of(4.0) * zt;
    let q00 = w * w + four_z * w * one_m_pq + four_z * zt * diff * diff;
    let q10 = two * four_z * zt * diff - four_z * w * qt;
    let q01 = -(two * four_z * zt * diff) - four_z * w * pt;
    let q2 = four_z * zt;
    let q11 = -(four_z * w) - two * four_z * zt;
    let zero = T::of(0.0);
    let (f00, f10, f01, f11) = match kind {
        KernelType::B => {
            let s = two * zt;
            (w + s * ((one + pt) + (one + qt)), s, s, zero)
        }
        KernelType::C => (one, zero, zero, zero),
        KernelType::D => {
            let s = two * (one - zt * zt);
            let t = s * two * zt;
            (s * (w + two * zt * one_m_pq), -(t * qt), -(t * pt), -t)
        }
        KernelType::A => unreachable!("type A has no determinant form"),
    };
    let inv = one / q00;
    let stride = nb + 1;
    g.clear();
    g.resize((na + 1) * stride, zero);
    for a in 0..=na {
        for b in 0..=nb {
            let mut acc = match (a, b) {
                (0, 0) => f00,
                (1, 0) => f10,
                (0, 1) => f01,
                (1, 1) => f11,
                _ => zero,
            };
            if a >= 1 {
                acc = acc - q10 * g[(a - 1) * stride + b];
            }
            if b >= 1 {
                acc = acc - q01 * g[a * stride + b - 1];
            }
            if a >= 2 {
                acc = acc - q2 * g[(a - 2) * stride + b];
            }
            if b >= 2 {
                acc = acc - q2 * g[a * stride + b - 2];
            }
            if a >= 1 && b >= 1 {
                acc = acc - q11 * g[(a - 1) * stride + b - 1];
            }
            g[a * stride + b] = acc * inv;
        }
    }
    if kind == KernelType::D {
        g[0] = g[0] + two;
    }
}

/// One cluster with offsets from its centre and the number of Taylor terms
/// beyond its size that the divided differences need.
struct Cluster<T> {
    range: Range<usize>,
    centre: f64,
    extra: usize,
    /// `h[r][j]`: complete homogeneous polynomial of degree `j` in the first
    /// `r + 1` offsets, stride `extra + 1`.
    h: Vec<T>,
}

/// Smallest `J` with `C(k − 1 + J, J)·κ^J` below the tail target.
fn extra_terms(k: usize, kappa: f64, tail: f64) -> usize {
    if k == 1 || kappa == 0.0 {
        return 0;
    }
    let mut bound = 1.0;
    for j in 1..MAX_TERMS {
        bound *= (k - 1 + j) as f64 / j as f64 * kappa;
        if bound < tail {
            return j;
        }
    }
    MAX_TERMS
}

impl<T: Real> Cluster<T> {
    fn new(c: &[f64], range: Range<usize>, radius: f64) -> Self {
        let pts = &c[range.clone()];
        if pts.len() == 1 {
            return Self {
                range,
                centre: pts[0],
                extra: 0,
                h: Vec::new(),
            };
        }
        let centre = 0.5 * (pts[0] + pts[pts.len() - 1]);
        // Sterbenz: the offsets are exact
        let umax = (pts[0] - centre).max(centre - pts[pts.len() - 1]);
        let extra = extra_terms(pts.len(), 2.0 * umax / radius, T::TAIL);
        let stride = extra + 1;
        let mut h = vec![T::of(0.0); pts.len() * stride];
        for (r, &x) in pts.iter().enumerate() {
            let ut = T::of(x - centre);
            h[r * stride] = T::of(1.0);
            for j in 1..stride {
                let prev = if r == 0 { T::of(0.0) } else { h[(r - 1) * stride + j] };
                h[r * stride + j] = prev + ut * h[r * stride + j - 1];
            }
        }
        Self {
            range,
            centre,
            extra,
            h,
        }
    }

    fn size(&self) -> usize {
        self.range.len()
    }

    /// Weight of Taylor order `j` beyond row `r`; singletons sit at their centre.
    #[inline]
    fn weight(&self, r: usize, j: usize) -> T {
        if self.h.is_empty() {
            T::of(1.0)
        } else {
            self.h[r * (self.extra + 1) + j]
        }
    }
}

/// Log-determinant of the divided-difference matrix of the entries.
pub(crate) fn log_det<T: Real>(
    kind: KernelType,
    c: &[f64],
    cc: &[Range<usize>],
    d: &[f64],
    dc: &[Range<usize>],
    z: f64,
) -> SignedLog {
    let m = c.len();
    let radius = entry_radius(z);
    let rows: Vec<Cluster<T>> = cc.iter().map(|r| Cluster::new(c, r.clone(), radius)).collect();
    let cols: Vec<Cluster<T>> = dc.iter().map(|r| Cluster::new(d, r.clone(), radius)).collect();
    let mut a = vec![T::of(0.0); m * m];
    let mut g: Vec<T> = Vec::new();
    for rc in &rows {
        for cl in &cols {
            if rc.size() == 1 && cl.size() == 1 {
                a[rc.range.start * m + cl.range.start] = T::entry(kind, rc.centre, cl.centre, z);
                continue;
            }
            let na = rc.size() - 1 + rc.extra;
            let nb = cl.size() - 1 + cl.extra;
            taylor_into(&mut g, kind, rc.centre, cl.centre, z, na, nb);
            let gs = nb + 1;
            for r in 0..rc.size() {
                for s in 0..cl.size() {
                    let mut acc = T::of(0.0);
                    for j in 0..=rc.extra {
                        let row = &g[(r + j) * gs + s..(r + j) * gs + s + cl.extra + 1];
                        let mut inner = T::of(0.0);
                        for (i, &gv) in row.iter().enumerate() {
                            inner = inner + gv * cl.weight(s, i);
                        }
                        acc = acc + rc.weight(r, j) * inner;
                    }
                    a[(rc.range.start + r) * m + cl.range.start + s] = acc;
                }
            }
        }
    }
    T::log_det(&mut a, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_coefficients_match_finite_differences() {
        let (p, q, z) = (0.3, -0.2, 0.4);
        for kind in [KernelType::B, KernelType::C, KernelType::D] {
            let mut g = Vec::new();
            taylor_into::<f64>(&mut g, kind, p, q, z, 2, 2);
            let f = |c: f64, d: f64| super::super::cauchy::entry(kind, c, d, z);
            let h = 1e-4;
            assert!((g[0] - f(p, q)).abs() < 1e-14);
            let dc = (f(p + h, q) - f(p - h, q)) / (2.0 * h);
            assert!((g[3] - dc).abs() < 1e-6 * (1.0 + dc.abs()), "{kind:?}");
            let dd = (f(p, q + h) - f(p, q - h)) / (2.0 * h);
            assert!((g[1] - dd).abs() < 1e-6 * (1.0 + dd.abs()), "{kind:?}");
            let dcd = (f(p + h, q + h) - f(p + h, q - h) - f(p - h, q + h) + f(p - h, q - h)) / (4.0 * h * h);
            assert!((g[4] - dcd).abs() < 1e-5 * (1.0 + dcd.abs()), "{kind:?}");
        }
    }

    #[test]
    fn clusters_respect_gap_and_diameter() {
        let z = 0.5;
        let s = cluster_scale(z);
        let c = [1.0, 1.0 - 0.5 * s, 1.0 - s, 0.5, 0.5 - 0.01 * s, 0.0];
        let cl = find_clusters(&c, z);
        assert_eq!(cl, vec![0..3, 3..5, 5..6]);
        // a long chain of small gaps is cut once it spans twice the scale
        let chain: Vec<f64> = (0..40).map(|i| -(i as f64) * 0.3 * s).collect();
        let cl = find_clusters(&chain, z);
        assert!(cl.len() > 1);
        assert!(cl.iter().all(|r| chain[r.start] - chain[r.end - 1] <= 2.0 * s));
    }
}
