use std::collections::BTreeMap;

use orthogof::kernels::KernelParams;
use orthogof::nulldist::{
    ad_ksample, estimate_power, local_power, partition_count, partition_generating_sum,
    sample_null_mixture, tz_null_moments, tz_null_quantiles, NullMixtureSpec, PartitionTable,
};
use orthogof::rng::RngStream;
use orthogof::samplers::{SamplerKind, SamplerSpec};
use orthogof::statistics::u_zq;
use proptest::prelude::*;
use rand_distr::{Distribution, StandardNormal};

fn moments(v: &[f64]) -> (f64, f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    let m4 = v.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    (m, var, m4)
}

/// Kolmogorov–Smirnov distance of `p` from the uniform law on [0, 1].
fn ks_uniform(p: &mut [f64]) -> f64 {
    p.sort_by(f64::total_cmp);
    let n = p.len() as f64;
    p.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).max((i + 1) as f64 / n - x))
        .fold(0.0, f64::max)
}

#[test]
fn partition_examples() {
    for n in 0..6 {
        assert_eq!(partition_count(n, 0), 1);
    }
    assert_eq!(partition_count(2, 4), 3);
    assert_eq!(partition_count(25, 4), 5);
}

proptest! {
    #[test]
    fn partition_table_recurrence(n in 1usize..30, k in 0usize..80) {
        let t = PartitionTable::new(30, 80);
        let p = |a: usize, b: usize| t.count(a, b).unwrap();
        let with_n = if k >= n { p(n, k - n) } else { 0 };
        prop_assert_eq!(p(n, k), with_n + p(n - 1, k));
        prop_assert!(p(n, k) >= p(n - 1, k));
    }
}

#[test]
fn generating_function_identity() {
    for n in [1usize, 5, 25] {
        for z in [0.3f64, 0.5, 0.9] {
            let product: f64 = (1..=n as i32).map(|i| 1.0 / (1.0 - z.powi(i))).product();
            let sum = partition_generating_sum(n, z, 3000);
            assert!((sum / product - 1.0).abs() < 1e-10, "n={n} z={z}");
        }
    }
}

#[test]
fn null_moment_examples() {
    let (m, v) = tz_null_moments(25, 0.5);
    assert!((m - 2.46).abs() < 0.005);
    assert!((v - 0.904_707_3).abs() < 1e-6);
    let (m9, _) = tz_null_moments(25, 0.9);
    assert!((m9 / 402_914.7 - 1.0).abs() < 1e-5, "{m9}");
}

#[test]
fn mixture_draws_reproduce_moments() {
    let spec = NullMixtureSpec::new(25, 0.5, 17).unwrap();
    let draws = sample_null_mixture(&spec, 100_000);
    let (m, v, m4) = moments(&draws);
    let (em, ev) = tz_null_moments(25, 0.5);
    let n = draws.len() as f64;
    let se_mean = (v / n).sqrt();
    let se_var = ((m4 - v * v) / n).sqrt();
    assert!((m - em).abs() < 4.0 * se_mean, "mean {m} vs {em}");
    assert!((v - ev).abs() < 4.0 * se_var, "variance {v} vs {ev}");
    assert!((m - 2.46).abs() < 0.02);
}

#[test]
fn mixture_small_z_limit_and_coupling() {
    let tiny = NullMixtureSpec::new(25, 1e-6, 3).unwrap();
    let draws = sample_null_mixture(&tiny, 20_000);
    let m = draws.iter().sum::<f64>() / draws.len() as f64;
    assert!((m / 1e-6 - 1.0).abs() < 0.05, "{m}");

    let lo = sample_null_mixture(&NullMixtureSpec::new(10, 0.4, 9).unwrap(), 500);
    let hi = sample_null_mixture(&NullMixtureSpec::new(10, 0.5, 9).unwrap(), 500);
    assert!(lo.iter().zip(&hi).all(|(a, b)| b > a));
}

/// Upper tail of `Σ_k z^k χ²_{p(n,k)}` by numerical Fourier inversion of the
/// product characteristic function.
fn mixture_sf_by_inversion(n: usize, z: f64, x: f64) -> f64 {
    use num_complex::Complex64;
    let terms = NullMixtureSpec::new(n, z, 0).unwrap().terms();
    let log_cf = |t: f64| -> Complex64 {
        terms
            .iter()
            .map(|&(w, d)| -0.5 * d * Complex64::new(1.0, -2.0 * w * t).ln())
            .sum()
    };
    // Simpson on [0, 400]; the integrand is smooth and decays polynomially
    let (upper, steps) = (400.0, 400_000);
    let h = upper / steps as f64;
    let f = |t: f64| {
        if t == 0.0 {
            // limit of Im(e^{-itx} φ(t)) / t
            return terms.iter().map(|&(w, d)| w * d).sum::<f64>() - x;
        }
        (Complex64::new(0.0, -t * x) + log_cf(t)).exp().im / t
    };
    let mut acc = f(0.0) + f(upper);
    for i in 1..steps {
        acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    0.5 + acc * h / 3.0 / std::f64::consts::PI
}

#[test]
fn null_quantiles_match_inversion_oracle() {
    let q = tz_null_quantiles(25, 0.5, &[0.05, 0.5, 0.95], 100_000, 1).unwrap();
    assert!(q[0].quantile < q[1].quantile && q[1].quantile < q[2].quantile);
    assert!(q.iter().all(|e| e.mc_stderr > 0.0 && e.mc_stderr < 0.05));
    // asymptotic median is close to the finite-sample table value 2.20
    assert!((q[1].quantile - 2.20).abs() < 0.1, "{:?}", q[1]);
    for e in &q {
        let tail = mixture_sf_by_inversion(25, 0.5, e.quantile);
        // tail probability at the estimated quantile, within 4 binomial SEs
        let se = (e.prob * (1.0 - e.prob) / 100_000.0).sqrt();
        assert!((tail - (1.0 - e.prob)).abs() < 4.0 * se + 1e-6, "{e:?}: tail {tail}");
    }
}

#[test]
fn ad_examples() {
    let a: Vec<f64> = (0..200).map(|i| (i as f64).sqrt()).collect();
    assert!(ad_ksample(&[&a, &a]).unwrap().pvalue >= 0.9);
    let x: Vec<f64> = (0..1000).map(f64::from).collect();
    let y: Vec<f64> = (10_000..11_000).map(f64::from).collect();
    assert!(ad_ksample(&[&x, &y]).unwrap().pvalue < 1e-6);
}

#[test]
fn ad_is_permutation_symmetric() {
    let mut rng = RngStream::from_seed(4);
    let s: Vec<Vec<f64>> = (0..3)
        .map(|k| (0..40 + 10 * k).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect();
    let a = ad_ksample(&[&s[0], &s[1], &s[2]]).unwrap();
    let b = ad_ksample(&[&s[2], &s[0], &s[1]]).unwrap();
    assert!((a.statistic - b.statistic).abs() < 1e-12);
    assert!((a.pvalue - b.pvalue).abs() < 1e-12);
}

#[test]
fn ad_pvalues_are_uniform_under_the_null() {
    let root = RngStream::from_seed(2718);
    let mut p: Vec<f64> = (0..1000u64)
        .map(|t| {
            let mut rng = root.split(t);
            let a: Vec<f64> = (0..1000).map(|_| StandardNormal.sample(&mut rng)).collect();
            let b: Vec<f64> = (0..1000).map(|_| StandardNormal.sample(&mut rng)).collect();
            ad_ksample(&[&a, &b]).unwrap().pvalue
        })
        .collect();
    let d = ks_uniform(&mut p);
    assert!(d < 0.05, "KS distance {d}");
}

#[test]
fn power_examples() {
    let null: Vec<f64> = (0..1000).map(|i| f64::from(i).sin()).collect();
    assert!((estimate_power(&null, &null, 0.05).unwrap() - 0.05).abs() < 0.002);
    assert_eq!(estimate_power(&[2.0, 3.0], &null, 0.05).unwrap(), 1.0);
}

#[test]
fn local_power_reduces_to_alpha_and_grows() {
    let none = BTreeMap::new();
    let p0 = local_power(25, 0.5, 0.05, &none, 20_000, 6).unwrap();
    assert!((p0 - 0.05).abs() < 0.005, "{p0}");
    let zeros = BTreeMap::from([(1usize, vec![0.0])]);
    assert_eq!(local_power(25, 0.5, 0.05, &zeros, 20_000, 6).unwrap(), p0);

    let mut last = p0;
    for theta2 in [1.0, 4.0, 9.0, 16.0] {
        let nc = BTreeMap::from([(1usize, vec![theta2])]);
        let p = local_power(25, 0.5, 0.05, &nc, 20_000, 6).unwrap();
        assert!(p >= last, "{p} < {last} at {theta2}");
        last = p;
    }
    assert!(last > 0.5);
}

#[test]
fn u_statistic_null_mean_is_stable_in_n() {
    let params = KernelParams::with_zq(0.2, 0.4);
    let reps = 500u64;
    let mut summary = Vec::new();
    for (c, big_n) in [50usize, 100, 200].into_iter().enumerate() {
        let spec = SamplerSpec::new(SamplerKind::Haar, 5, 0);
        let root = RngStream::from_seed(40 + c as u64);
        let v: Vec<f64> = (0..reps)
            .map(|r| u_zq(&spec.draw_sample(big_n, &root.split(r)), &params).unwrap().value)
            .collect();
        let (m, var, _) = moments(&v);
        summary.push((m, (var / reps as f64).sqrt()));
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            let (a, sa) = summary[i];
            let (b, sb) = summary[j];
            assert!((a - b).abs() < 3.0 * (sa * sa + sb * sb).sqrt(), "{summary:?}");
        }
    }
}
