use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{check_sample, PValueMethod, StatisticResult};
use crate::error::Result;
use crate::linalg::{GroupElement, Matrix};

/// Rayleigh statistic `n N Tr(ḡᵀḡ)`.
pub fn rayleigh(sample: &[GroupElement]) -> Result<StatisticResult> {
    rayleigh_with(sample, false)
}

/// Rayleigh statistic with an optional asymptotic χ²_{n²} p-value.
pub fn rayleigh_with(sample: &[GroupElement], pvalue: bool) -> Result<StatisticResult> {
    let n = check_sample(sample)?;
    let big_n = sample.len() as f64;
    let mut mean = Matrix::zeros(n, n);
    for g in sample {
        for (m, &x) in mean.as_mut_slice().iter_mut().zip(g.matrix().as_slice()) {
            *m += x;
        }
    }
    mean.scale(1.0 / big_n);
    let value = n as f64 * big_n * mean.frobenius_dot(&mean);
    let mut r = StatisticResult::new("rayleigh", value, sample);
    if pvalue {
        let dof = (n * n) as f64;
        let chi = ChiSquared::new(dof).expect("positive degrees of freedom");
        r.pvalue = Some(chi.sf(value));
        r.pvalue_method = PValueMethod::Chi2;
    }
    Ok(r)
}

/// Giné statistic `(1/N) Σ_i Σ_j √Tr(I − g_iᵀ g_j)`.
pub fn gine(sample: &[GroupElement]) -> Result<StatisticResult> {
    let n = check_sample(sample)? as f64;
    let big_n = sample.len();
    let mut total = 0.0;
    for i in 0..big_n {
        let mut row = 0.0;
        for j in (i + 1)..big_n {
            let tr = sample[i].matrix().frobenius_dot(sample[j].matrix());
            row += (n - tr).max(0.0).sqrt();
        }
        total += 2.0 * row;
    }
    Ok(StatisticResult::new("gine", total / big_n as f64, sample))
}
