use rand::Rng;
use rand_distr::{ChiSquared, Distribution};
use serde::{Deserialize, Serialize};

use super::partitions::partition_row_f64;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Default bound on the omitted tail mean, relative to the full mean.
pub const MIXTURE_TOL: f64 = 1e-8;
const MAX_TRUNCATION: usize = 100_000;

/// Mean and variance of the limiting null law of `T_z` on SO(2n+1).
pub fn tz_null_moments(n: usize, z: f64) -> (f64, f64) {
    let mut a = 1.0;
    let mut b = 1.0;
    for i in 1..=n as i32 {
        a /= 1.0 - z.powi(i);
        b /= 1.0 - z.powi(2 * i);
    }
    (a - 1.0, 2.0 * (b - 1.0))
}

fn check_z(z: f64) -> Result<()> {
    if z > 0.0 && z < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "z",
            reason: format!("must lie in (0, 1), got {z}"),
        })
    }
}

/// Truncated mixture `Σ_{k=1}^{K} z^k χ²_{p(n,k)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullMixtureSpec {
    pub rank: usize,
    pub z: f64,
    pub truncation: usize,
    pub seed: u64,
}

impl NullMixtureSpec {
    /// Chooses the smallest `K` whose omitted tail mean is at most
    /// [`MIXTURE_TOL`] times the full mean.
    pub fn new(rank: usize, z: f64, seed: u64) -> Result<Self> {
        Self::with_tolerance(rank, z, seed, MIXTURE_TOL)
    }

    pub fn with_tolerance(rank: usize, z: f64, seed: u64, tol: f64) -> Result<Self> {
        check_z(z)?;
        if rank == 0 {
            return Err(Error::InvalidParameter {
                name: "rank",
                reason: "must be at least 1".into(),
            });
        }
        let truncation = truncation_for(rank, z, tol)?;
        Ok(Self {
            rank,
            z,
            truncation,
            seed,
        })
    }

    /// Weights `z^k` and degrees of freedom `p(n,k)` for `k = 1..=K`.
    pub fn terms(&self) -> Vec<(f64, f64)> {
        let row = partition_row_f64(self.rank, self.truncation);
        (1..=self.truncation)
            .map(|k| (self.z.powi(k as i32), row[k]))
            .collect()
    }

    /// Mean of the truncated mixture.
    pub fn truncated_mean(&self) -> f64 {
        self.terms().iter().map(|(w, d)| w * d).sum()
    }
}

fn truncation_for(rank: usize, z: f64, tol: f64) -> Result<usize> {
    let (mean, _) = tz_null_moments(rank, z);
    let mut k_max = 64;
    loop {
        let row = partition_row_f64(rank, k_max);
        let mut partial = 0.0;
        let mut zk = 1.0;
        for (k, p) in row.iter().enumerate().skip(1) {
            zk *= z;
            partial += zk * p;
            if mean - partial <= tol * mean {
                return Ok(k);
            }
        }
        if k_max >= MAX_TRUNCATION {
            return Err(Error::InvalidParameter {
                name: "z",
                reason: format!("mixture needs more than {MAX_TRUNCATION} terms at z = {z}"),
            });
        }
        k_max = (k_max * 4).min(MAX_TRUNCATION);
    }
}

/// Samples one value per draw; draw `d` uses the child stream `d`, and the
/// chi-square terms are drawn in order of `k`, so specs sharing a seed share
/// their leading terms.
pub fn sample_null_mixture(spec: &NullMixtureSpec, draws: usize) -> Vec<f64> {
    let terms: Vec<(f64, ChiSquared<f64>)> = spec
        .terms()
        .into_iter()
        .filter(|&(_, d)| d > 0.0)
        .map(|(w, d)| (w, ChiSquared::new(d).expect("positive degrees of freedom")))
        .collect();
    let root = RngStream::from_seed(spec.seed);
    (0..draws as u64)
        .map(|d| {
            let mut rng = root.split(d);
            terms.iter().map(|(w, chi)| w * chi.sample(&mut rng)).sum()
        })
        .collect()
}

/// Empirical quantile with its Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileEstimate {
    pub prob: f64,
    pub quantile: f64,
    pub mc_stderr: f64,
}

/// Order-statistic quantile of `sorted` (ascending). The standard error is
/// half the width of the order-statistic interval `n p ± √(n p (1 − p))`.
pub fn order_statistic_quantile(sorted: &[f64], prob: f64) -> QuantileEstimate {
    let n = sorted.len();
    let at = |pos: f64| sorted[(pos.ceil().max(1.0) as usize).min(n) - 1];
    let np = n as f64 * prob;
    let spread = (np * (1.0 - prob)).sqrt();
    QuantileEstimate {
        prob,
        quantile: at(np),
        mc_stderr: 0.5 * (at(np + spread) - at(np - spread)),
    }
}

/// Quantiles of the limiting `T_z` null law on SO(2n+1) from mixture draws.
pub fn tz_null_quantiles(
    rank: usize,
    z: f64,
    probs: &[f64],
    draws: usize,
    seed: u64,
) -> Result<Vec<QuantileEstimate>> {
    for &p in probs {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter {
                name: "prob",
                reason: format!("must lie in (0, 1), got {p}"),
            });
        }
    }
    if draws == 0 {
        return Err(Error::InvalidParameter {
            name: "draws",
            reason: "must be positive".into(),
        });
    }
    let spec = NullMixtureSpec::new(rank, z, seed)?;
    let mut v = sample_null_mixture(&spec, draws);
    v.sort_by(f64::total_cmp);
    Ok(probs.iter().map(|&p| order_statistic_quantile(&v, p)).collect())
}

/// Single quantile; see [`tz_null_quantiles`].
pub fn tz_null_quantile(rank: usize, z: f64, prob: f64, draws: usize, seed: u64) -> Result<QuantileEstimate> {
    Ok(tz_null_quantiles(rank, z, &[prob], draws, seed)?[0])
}

/// Monte Carlo upper-tail p-value `(1 + #{draws ≥ t}) / (1 + draws)`.
/// Invalid `z` yields `NaN`.
pub fn tz_null_pvalue(rank: usize, z: f64, t: f64, draws: usize, seed: u64) -> f64 {
    let Ok(spec) = NullMixtureSpec::new(rank, z, seed) else {
        return f64::NAN;
    };
    let v = sample_null_mixture(&spec, draws);
    let above = v.iter().filter(|&&x| x >= t).count();
    (above + 1) as f64 / (draws + 1) as f64
}

/// Uniform on `(0, 1)`, never exactly 0.
pub(crate) fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_moments() {
        let z: f64 = 0.37;
        let (m, v) = tz_null_moments(1, z);
        assert!((m - z / (1.0 - z)).abs() < 1e-15);
        assert!((v - 2.0 * z * z / (1.0 - z * z)).abs() < 1e-15);
    }

    #[test]
    fn truncation_meets_tolerance() {
        let s = NullMixtureSpec::new(25, 0.5, 0).unwrap();
        let (m, _) = tz_null_moments(25, 0.5);
        assert!(m - s.truncated_mean() <= 1e-8 * m);
        assert!(NullMixtureSpec::new(3, 1.0, 0).is_err());
    }

    #[test]
    fn quantile_of_uniform_grid() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        let q = order_statistic_quantile(&v, 0.5);
        assert_eq!(q.quantile, 500.0);
        assert!(q.mc_stderr > 10.0 && q.mc_stderr < 20.0);
    }
}
