use std::collections::BTreeMap;

use rand_distr::{ChiSquared, Distribution};

use super::mixture::{open_uniform, NullMixtureSpec};
use super::partitions::partition_row_f64;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Fraction of `alt` strictly above the empirical `1 − α` quantile of `null`
/// (the order statistic of rank `⌈(1 − α) R⌉`).
pub fn estimate_power(alt: &[f64], null: &[f64], alpha: f64) -> Result<f64> {
    if alt.is_empty() || null.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("must lie in (0, 1), got {alpha}"),
        });
    }
    let c = null_cutoff(null, alpha);
    Ok(alt.iter().filter(|&&a| a > c).count() as f64 / alt.len() as f64)
}

/// Empirical `1 − α` quantile used by [`estimate_power`].
pub fn null_cutoff(null: &[f64], alpha: f64) -> f64 {
    let mut v = null.to_vec();
    v.sort_by(f64::total_cmp);
    let r = ((1.0 - alpha) * v.len() as f64).ceil() as usize;
    v[r.clamp(1, v.len()) - 1]
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Quantile of the noncentral χ²₁ with noncentrality `delta` at level `u`.
pub fn noncentral_chi2_1_quantile(u: f64, delta: f64) -> f64 {
    let a = delta.max(0.0).sqrt();
    let cdf = |s: f64| normal_cdf(s - a) - normal_cdf(-s - a);
    let (mut lo, mut hi) = (0.0, a + 40.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    s * s
}

/// Monte Carlo power of the asymptotic `T_z` test under a local alternative.
///
/// `noncentrality` maps a weight `|λ|` to the noncentralities of the listed
/// components at that weight; all other components are central. The cutoff
/// is the `1 − α` quantile of the same draws with every noncentrality set to
/// zero, so the estimate is exactly `α` up to ties when all entries are zero.
/// Noncentral components use inverse-CDF draws, so the power is monotone in
/// each noncentrality for a fixed seed.
pub fn local_power(
    rank: usize,
    z: f64,
    alpha: f64,
    noncentrality: &BTreeMap<usize, Vec<f64>>,
    draws: usize,
    seed: u64,
) -> Result<f64> {
    if draws == 0 {
        return Err(Error::InvalidParameter {
            name: "draws",
            reason: "must be positive".into(),
        });
    }
    let base = NullMixtureSpec::new(rank, z, seed)?;
    let k_max = noncentrality
        .keys()
        .copied()
        .max()
        .unwrap_or(0)
        .max(base.truncation);
    let dof = partition_row_f64(rank, k_max);
    for (&k, list) in noncentrality {
        if k == 0 || list.len() as f64 > dof[k] {
            return Err(Error::InvalidParameter {
                name: "noncentrality",
                reason: format!("weight {k} has {} components, {} listed", dof[k], list.len()),
            });
        }
        if list.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::InvalidParameter {
                name: "noncentrality",
                reason: "values must be finite and nonnegative".into(),
            });
        }
    }
    struct Term<'a> {
        weight: f64,
        central: Option<ChiSquared<f64>>,
        listed: &'a [f64],
    }
    let terms: Vec<Term> = (1..=k_max)
        .map(|k| {
            let listed = noncentrality.get(&k).map_or(&[][..], Vec::as_slice);
            let rest = dof[k] - listed.len() as f64;
            Term {
                weight: z.powi(k as i32),
                central: (rest > 0.0).then(|| ChiSquared::new(rest).expect("positive dof")),
                listed,
            }
        })
        .collect();

    let root = RngStream::from_seed(seed);
    let mut null = Vec::with_capacity(draws);
    let mut alt = Vec::with_capacity(draws);
    for d in 0..draws as u64 {
        let mut rng = root.split(d);
        let (mut n0, mut n1) = (0.0, 0.0);
        for t in &terms {
            let mut c = t.central.map_or(0.0, |chi| chi.sample(&mut rng));
            let mut a = c;
            for &delta in t.listed {
                let u = open_uniform(&mut rng);
                c += noncentral_chi2_1_quantile(u, 0.0);
                a += noncentral_chi2_1_quantile(u, delta);
            }
            n0 += t.weight * c;
            n1 += t.weight * a;
        }
        null.push(n0);
        alt.push(n1);
    }
    estimate_power(&alt, &null, alpha)
}
