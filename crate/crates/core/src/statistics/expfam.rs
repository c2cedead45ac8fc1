use super::selberg::{selberg_derivatives, ExpFamParams};
use super::{check_sample, PValueMethod, StatOptions, StatWarnings, StatisticResult};
use crate::error::{Error, Result};
use crate::kernels::prepare_spectrum;
use crate::linalg::lu::cholesky_solve;
use crate::linalg::{cos_spectrum_with, EigenWorkspace, GroupElement, PAIRING_TOL};

const CLAMP: f64 = 1.0 - 1e-12;

/// `(T₁, T₂, T₃) = (2Σ_{i<j} log|x_i − x_j|, Σ log(1 − x_i), Σ log(1 + x_i))`.
pub fn spectrum_sufficient(x: &[f64]) -> [f64; 3] {
    let mut t = [0.0; 3];
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            t[0] += 2.0 * (x[i] - x[j]).abs().ln();
        }
        t[1] += (-x[i]).ln_1p();
        t[2] += x[i].ln_1p();
    }
    t
}

/// Upper tail of χ² with three degrees of freedom.
pub fn chi2_3_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let s = statrs::function::erf::erfc((x / 2.0).sqrt());
    (s + (2.0 * x / std::f64::consts::PI).sqrt() * (-x / 2.0).exp()).clamp(0.0, 1.0)
}

/// Exponential-family score statistic with the Haar reference of the sample's group.
pub fn expfam_statistic(sample: &[GroupElement]) -> Result<StatisticResult> {
    expfam_statistic_with(sample, None, &StatOptions::default())
}

/// As [`expfam_statistic`] with an explicit reference point and options.
pub fn expfam_statistic_with(
    sample: &[GroupElement],
    reference: Option<ExpFamParams>,
    opts: &StatOptions,
) -> Result<StatisticResult> {
    let n = check_sample(sample)?;
    let det = sample[0].det_sign();
    if sample.iter().any(|g| g.det_sign() != det) {
        return Err(Error::MixedDeterminants);
    }
    let mut warnings = StatWarnings::default();
    if det < 0 {
        if !opts.allow_det_minus {
            return Err(Error::DeterminantMinusOne);
        }
        warnings.det_minus_overrides = sample.len() as u64;
    }
    let reference = reference.unwrap_or(match (n % 2 == 1, det > 0) {
        (true, true) => ExpFamParams::SO_ODD,
        (false, true) => ExpFamParams::SO_EVEN,
        (true, false) => ExpFamParams::O_ODD_MINUS,
        (false, false) => ExpFamParams::O_EVEN_MINUS,
    });

    let kp = opts.kernel_params(0.5, 0.5);
    let mut ws = EigenWorkspace::new(n);
    let mut mean = [0.0; 3];
    let mut rank = 0;
    for g in sample {
        let spec = cos_spectrum_with(g.matrix(), g.det_sign(), PAIRING_TOL, &mut ws)?;
        rank = spec.m();
        let prepared = prepare_spectrum(&spec.x, &kp)?;
        if prepared.jittered {
            warnings.jitter_events += 1;
        }
        let mut x = prepared.c;
        for v in &mut x {
            let c = v.clamp(-CLAMP, CLAMP);
            if c != *v {
                warnings.clamped_logs += 1;
                *v = c;
            }
        }
        let t = spectrum_sufficient(&x);
        for k in 0..3 {
            mean[k] += t[k];
        }
    }
    let big_n = sample.len() as f64;
    for m in &mut mean {
        *m /= big_n;
    }
    let d = selberg_derivatives(rank, reference)?;
    let diff: Vec<f64> = (0..3).map(|k| mean[k] - d.gradient[k]).collect();
    // Σ = ∇²A / N, so (T̄ − μ)ᵀ Σ⁻¹ (T̄ − μ) = N (T̄ − μ)ᵀ (∇²A)⁻¹ (T̄ − μ)
    let flat: Vec<f64> = d.hessian.iter().flatten().copied().collect();
    let sol = cholesky_solve(&flat, 3, &diff).ok_or(Error::Singular)?;
    let quad: f64 = diff.iter().zip(&sol).map(|(a, b)| a * b).sum();
    let value = big_n * quad;

    let mut r = StatisticResult::new("expfam", value, sample)
        .param("gamma", reference.gamma)
        .param("alpha", reference.alpha)
        .param("beta", reference.beta);
    r.pvalue = Some(chi2_3_survival(value));
    r.pvalue_method = PValueMethod::Chi2_3;
    r.warnings = warnings;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi2_3_tail_values() {
        // qchisq(0.95, 3) = 7.814728
        assert!((chi2_3_survival(7.814_727_903_251_178) - 0.05).abs() < 1e-9);
        assert_eq!(chi2_3_survival(0.0), 1.0);
        // statistic values quoted for one JOR step map to these p-values
        assert!((chi2_3_survival(1.34) - 0.72).abs() < 0.01);
        assert!((chi2_3_survival(3.84) - 0.28).abs() < 0.01);
    }

    #[test]
    fn identity_sample_is_jittered_not_fatal() {
        let sample = vec![GroupElement::identity(7); 3];
        let r = expfam_statistic(&sample).unwrap();
        assert!(r.value.is_finite());
        assert_eq!(r.warnings.jitter_events, 3);
        let strict = StatOptions {
            strict_degenerate: true,
            ..StatOptions::default()
        };
        assert!(matches!(
            expfam_statistic_with(&sample, None, &strict),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }
}
