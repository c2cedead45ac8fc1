use super::{check_sample, StatisticResult};
use crate::error::{Error, Result};
use crate::linalg::{cos_spectrum_with, EigenWorkspace, GroupElement, PAIRING_TOL};

/// Chebyshev polynomial `T_k(x) = cos(k arccos x)` by recurrence.
fn chebyshev_t(k: u32, x: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut a, mut b) = (1.0, x);
            for _ in 1..k {
                let c = 2.0 * x * b - a;
                a = b;
                b = c;
            }
            b
        }
    }
}

/// Contribution of the eigenvalues ±1 that are not part of a conjugate pair.
fn det_term(dim: usize, det: i8, k: u32) -> f64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    match (dim % 2 == 1, det > 0) {
        (true, true) => 1.0,
        (true, false) => sign,
        (false, true) => 0.0,
        (false, false) => 1.0 + sign,
    }
}

/// Mean power trace `(1/N) Σ Tr(g_i^k)` from the eigenvalue cosines.
pub fn trace_power(sample: &[GroupElement], k: u32) -> Result<StatisticResult> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "power must be at least 1".into(),
        });
    }
    let n = check_sample(sample)?;
    let mut ws = EigenWorkspace::new(n);
    let mut total = 0.0;
    for g in sample {
        let s = cos_spectrum_with(g.matrix(), g.det_sign(), PAIRING_TOL, &mut ws)?;
        let body: f64 = s.x.iter().map(|&x| chebyshev_t(k, x)).sum();
        total += det_term(n, g.det_sign(), k) + 2.0 * body;
    }
    Ok(StatisticResult::new("trace", total / sample.len() as f64, sample).param("k", f64::from(k)))
}
