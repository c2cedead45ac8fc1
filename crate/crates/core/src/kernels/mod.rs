//! Reproducing kernels `Σ_{λ≠0} z^{|λ|} χ_λ(g) χ_λ(h)` in closed form, the
//! closed-form weighted character sums behind the full-group statistic, and
//! slow character-series oracles used to check both.

mod cauchy;
mod characters;
mod confluent;
mod uq;

use std::ops::Range;

use serde::{Deserialize, Serialize};

pub use cauchy::{cauchy_kernel, cauchy_kernel_a, cauchy_kernel_prepared, KernelEval};
pub use characters::{
    character, character_a, kernel_series_oracle, partitions_up_to, Partition,
};
pub use uq::{uq_log_ratio, uq_weight_sum, uq_weight_sum_a, UqConstants};

use crate::error::{Error, Result};
use crate::linalg::SignedLog;

/// Group family a kernel belongs to.
pub use crate::linalg::GroupType as KernelType;

/// Arithmetic used for the Cauchy determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelPrecision {
    Double,
    DoubleDouble,
    /// Double precision while `m·ln(1/z)` is small, double-double beyond.
    #[default]
    Auto,
}

/// Above this value of `m·ln(1/z)` double precision loses more than ~1e-8.
pub(crate) const AUTO_DOUBLE_LIMIT: f64 = 18.0;
/// Above this value even double-double is not trusted; a warning is raised.
pub(crate) const AUTO_DD_LIMIT: f64 = 36.0;

/// What to do with coincident cosines within one spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneratePolicy {
    #[default]
    Jitter,
    Strict,
}

/// Parameters governing kernel evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KernelParams {
    pub z: f64,
    /// Only used by the full-group family.
    pub q: f64,
    /// Jitter size δ for degenerate spectra.
    pub jitter: f64,
    /// Two cosines closer than this count as coincident.
    pub degeneracy_tol: f64,
    pub degenerate: DegeneratePolicy,
    pub precision: KernelPrecision,
    /// Upper index of the products in the full-group family; the rank when unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_bound: Option<usize>,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self {
            z: 0.5,
            q: 0.4,
            jitter: 1e-7,
            degeneracy_tol: 1e-10,
            degenerate: DegeneratePolicy::Jitter,
            precision: KernelPrecision::Auto,
            rank_bound: None,
        }
    }
}

impl KernelParams {
    pub fn with_z(z: f64) -> Self {
        Self {
            z,
            ..Self::default()
        }
    }

    pub fn with_zq(z: f64, q: f64) -> Self {
        Self {
            z,
            q,
            ..Self::default()
        }
    }

    pub fn strict(mut self) -> Self {
        self.degenerate = DegeneratePolicy::Strict;
        self
    }

    pub fn precision(mut self, p: KernelPrecision) -> Self {
        self.precision = p;
        self
    }

    fn check_unit(name: &'static str, v: f64) -> Result<()> {
        if v > 0.0 && v < 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name,
                reason: format!("must lie in (0, 1), got {v}"),
            })
        }
    }

    pub fn validate_z(&self) -> Result<()> {
        Self::check_unit("z", self.z)
    }

    pub fn validate_zq(&self) -> Result<()> {
        Self::check_unit("z", self.z)?;
        Self::check_unit("q", self.q)
    }

    /// Whether double-double is used for rank `m`, and whether the result
    /// should carry a precision warning.
    pub(crate) fn resolve_precision(&self, m: usize) -> (bool, bool) {
        let difficulty = m as f64 * (1.0 / self.z).ln();
        match self.precision {
            KernelPrecision::Double => (false, difficulty > AUTO_DOUBLE_LIMIT),
            KernelPrecision::DoubleDouble => (true, difficulty > AUTO_DD_LIMIT),
            KernelPrecision::Auto => (
                difficulty > AUTO_DOUBLE_LIMIT,
                difficulty > AUTO_DD_LIMIT,
            ),
        }
    }
}

impl KernelParams {
    /// As [`resolve_precision`](Self::resolve_precision), also escalating to
    /// double-double for large ties, and for any tie once the entries vary
    /// on a scale much wider than the clusters (small `z`).
    pub(crate) fn resolve_precision_clustered(&self, m: usize, largest: usize) -> (bool, bool) {
        let (dd, warn) = self.resolve_precision(m);
        let big = largest >= confluent::DD_CLUSTER
            || (largest > 1 && confluent::entry_radius(self.z) > 1.0);
        match self.precision {
            KernelPrecision::Double => (false, warn || big),
            KernelPrecision::DoubleDouble => (true, warn),
            KernelPrecision::Auto => (dd || big, warn),
        }
    }
}

/// A cosine spectrum ready for repeated kernel evaluation: sorted descending,
/// jittered if needed, grouped into clusters of close cosines, with the
/// Vandermonde divisor cached. Only valid for kernels with the same `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedSpectrum {
    pub c: Vec<f64>,
    /// Runs of cosines close enough to be treated confluently.
    pub clusters: Vec<Range<usize>>,
    /// `∏_{i<j} (c_i − c_j)` over pairs in different clusters, with a sign
    /// per cluster; the full Vandermonde product when no cosines cluster.
    pub divisor: SignedLog,
    pub jittered: bool,
}

impl PreparedSpectrum {
    pub fn m(&self) -> usize {
        self.c.len()
    }

    /// Size of the largest cluster.
    pub fn largest_cluster(&self) -> usize {
        self.clusters.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    /// Whether every cosine is its own cluster.
    pub fn is_separated(&self) -> bool {
        self.clusters.len() == self.c.len()
    }
}

/// Smallest gap between consecutive sorted cosines and its position.
fn min_gap(sorted: &[f64]) -> Option<(usize, f64)> {
    sorted
        .windows(2)
        .enumerate()
        .map(|(i, w)| (i, w[0] - w[1]))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Deterministic jitter `x'_i = (1 − mδ) x_i + δ((m+1)/2 − i)`, 1-based `i`.
/// Keeps the values strictly decreasing and inside `[−1, 1]`.
pub fn jitter_spectrum(x: &mut [f64], delta: f64) {
    let m = x.len() as f64;
    let shrink = 1.0 - m * delta;
    for (k, v) in x.iter_mut().enumerate() {
        let i = (k + 1) as f64;
        *v = shrink * *v + delta * ((m + 1.0) / 2.0 - i);
    }
}

/// Sorts, applies the degeneracy policy and caches the Vandermonde product.
pub fn prepare_spectrum(x: &[f64], params: &KernelParams) -> Result<PreparedSpectrum> {
    let mut c: Vec<f64> = x.iter().map(|v| v.clamp(-1.0, 1.0)).collect();
    c.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut jittered = false;
    if let Some((i, gap)) = min_gap(&c) {
        if gap <= params.degeneracy_tol {
            match params.degenerate {
                DegeneratePolicy::Strict => {
                    return Err(Error::DegenerateSpectrum {
                        i,
                        j: i + 1,
                        tol: params.degeneracy_tol,
                    })
                }
                DegeneratePolicy::Jitter => {
                    jitter_spectrum(&mut c, params.jitter);
                    jittered = true;
                    if let Some((i, gap)) = min_gap(&c) {
                        if gap <= 0.0 {
                            return Err(Error::DegenerateSpectrum {
                                i,
                                j: i + 1,
                                tol: params.degeneracy_tol,
                            });
                        }
                    }
                }
            }
        }
    }
    let clusters = confluent::find_clusters(&c, params.z);
    let divisor = confluent::split_vandermonde(&c, &clusters);
    Ok(PreparedSpectrum {
        c,
        clusters,
        divisor,
        jittered,
    })
}

/// `∏_{i<j} (x_i − x_j)` in signed-log form.
pub fn log_vandermonde(x: &[f64]) -> SignedLog {
    let mut acc = SignedLog::ONE;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            acc = acc * SignedLog::from_f64(x[i] - x[j]);
        }
    }
    acc
}
