//! Null distributions: partition counts, the limiting chi-square mixture of
//! `T_z`, its moments and quantiles, local power, and the k-sample
//! Anderson–Darling comparison.

mod ad;
mod mixture;
mod partitions;
mod power;

pub use ad::{ad_ksample, asymptotic_sf, AdResult};
pub use mixture::{
    order_statistic_quantile, sample_null_mixture, tz_null_moments, tz_null_pvalue,
    tz_null_quantile, tz_null_quantiles, NullMixtureSpec, QuantileEstimate, MIXTURE_TOL,
};
pub use partitions::{partition_count, PartitionTable};
pub use power::{estimate_power, local_power, noncentral_chi2_1_quantile, null_cutoff};

/// `Σ_{k=0}^{K} z^k p(n, k)`, the truncated generating function of partitions
/// into at most `n` parts.
pub fn partition_generating_sum(n: usize, z: f64, k_max: usize) -> f64 {
    let row = partitions::partition_row_f64(n, k_max);
    let mut zk = 1.0;
    let mut total = 0.0;
    for p in row {
        total += zk * p;
        zk *= z;
    }
    total
}
