use num_complex::Complex64;

use super::{KernelParams, KernelType};
use crate::error::{Error, Result};

/// Spectrum-independent parts of the full-group weighted character sum.
#[derive(Debug, Clone, PartialEq)]
pub struct UqConstants {
    pub kind: KernelType,
    /// `z q^{i-1}` for `i = 1..=bound`.
    pub w: Vec<f64>,
    /// Log of the numerator product.
    pub log_numerator: f64,
}

impl UqConstants {
    /// Products run over `1..=bound`, where `bound` is `params.rank_bound` or
    /// the rank of the spectra.
    pub fn new(kind: KernelType, rank: usize, params: &KernelParams) -> Result<Self> {
        params.validate_zq()?;
        let (z, q) = (params.z, params.q);
        let bound = params.rank_bound.unwrap_or(rank);
        let w: Vec<f64> = (0..bound).map(|i| z * q.powi(i as i32)).collect();
        let mut log_numerator = 0.0;
        let diag_included = kind == KernelType::D;
        for i in 1..=bound {
            let start = if diag_included { i } else { i + 1 };
            for j in start..=bound {
                log_numerator += (-(z * z) * q.powi((i + j - 2) as i32)).ln_1p();
            }
        }
        if kind == KernelType::B {
            log_numerator += w.iter().map(|wi| wi.ln_1p()).sum::<f64>();
        }
        Ok(Self {
            kind,
            w,
            log_numerator,
        })
    }

    /// Log of the ratio `numerator / ∏_{i,j}(1 − 2 w_i c_j + w_i²)`.
    pub fn log_ratio(&self, cosines: &[f64]) -> f64 {
        let mut log_den = 0.0;
        for &c in cosines {
            let mut prod = 1.0;
            for &w in &self.w {
                // 1 − 2wc + w² = (1 − w)² + 2w(1 − c), exact sign and no cancellation
                let one_minus_w = 1.0 - w;
                prod *= one_minus_w * one_minus_w + 2.0 * w * (1.0 - c);
            }
            log_den += prod.ln();
        }
        self.log_numerator - log_den
    }

    /// The weighted character sum `ratio − 1`.
    pub fn value(&self, cosines: &[f64]) -> f64 {
        self.log_ratio(cosines).exp_m1()
    }
}

/// Log ratio for one relative spectrum.
pub fn uq_log_ratio(kind: KernelType, cosines: &[f64], params: &KernelParams) -> Result<f64> {
    Ok(UqConstants::new(kind, cosines.len(), params)?.log_ratio(cosines))
}

/// `Σ_{λ≠0} c_λ(z,q) χ_λ` at a relative spectrum of cosines (types B, C, D).
pub fn uq_weight_sum(kind: KernelType, cosines: &[f64], params: &KernelParams) -> Result<f64> {
    if kind == KernelType::A {
        return Err(Error::InvalidParameter {
            name: "kind",
            reason: "type A takes eigen-angles; use uq_weight_sum_a".into(),
        });
    }
    Ok(UqConstants::new(kind, cosines.len(), params)?.value(cosines))
}

/// Type A: `∏_{l,k} 1/(1 − z q^{l−1} e^{iθ_k}) − 1` on the eigen-angles of `g_i^* g_j`.
pub fn uq_weight_sum_a(theta: &[f64], params: &KernelParams) -> Result<Complex64> {
    params.validate_zq()?;
    let bound = params.rank_bound.unwrap_or(theta.len());
    let mut log = Complex64::new(0.0, 0.0);
    for l in 0..bound {
        let w = params.z * params.q.powi(l as i32);
        for &t in theta {
            log -= (Complex64::new(1.0, 0.0) - Complex64::from_polar(w, t)).ln();
        }
    }
    Ok(log.exp() - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_a_single_factor() {
        let v = uq_weight_sum_a(&[0.0], &KernelParams::with_zq(0.5, 0.3)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-14 && v.im.abs() < 1e-14);
    }

    #[test]
    fn type_b_rank_two_at_identity() {
        let (z, q) = (0.2, 0.4);
        let p = KernelParams::with_zq(z, q);
        let got = uq_weight_sum(KernelType::B, &[1.0, 1.0], &p).unwrap();
        // every one of the four denominator factors (i, j) is (1 − z q^{i−1})²
        let num = (1.0 - z * z * q) * (1.0 + z) * (1.0 + z * q);
        let den = (1.0 - z).powi(4) * (1.0 - z * q).powi(4);
        assert!((got - (num / den - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn identity_maximizes_the_sum() {
        let p = KernelParams::with_zq(0.3, 0.6);
        for kind in [KernelType::B, KernelType::C, KernelType::D] {
            let top = uq_weight_sum(kind, &[1.0, 1.0, 1.0], &p).unwrap();
            let other = uq_weight_sum(kind, &[0.9, -0.2, 0.5], &p).unwrap();
            assert!(top > other);
            assert!(other > -1.0);
        }
    }

    #[test]
    fn rank_bound_override_extends_products() {
        let mut p = KernelParams::with_zq(0.3, 0.5);
        let base = uq_weight_sum(KernelType::C, &[0.2], &p).unwrap();
        p.rank_bound = Some(3);
        let wider = uq_weight_sum(KernelType::C, &[0.2], &p).unwrap();
        assert!((base - wider).abs() > 1e-6);
    }
}
