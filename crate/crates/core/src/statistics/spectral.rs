use super::{check_sample, PValueMethod, StatOptions, StatWarnings, StatisticResult};
use crate::error::{Error, Result};
use crate::kernels::{
    cauchy_kernel_prepared, prepare_spectrum, KernelParams, KernelType, PreparedSpectrum,
    UqConstants,
};
use crate::linalg::{
    cos_spectrum_with, relative_spectrum_with, EigenWorkspace, GroupElement, PAIRING_TOL,
};
use crate::nulldist::tz_null_pvalue;

/// Spectral statistic `T_z = (1/N) Σ_{i,j} K_z(g_i, g_j)` on SO(2m+1).
pub fn t_z(sample: &[GroupElement], params: &KernelParams, opts: &StatOptions) -> Result<StatisticResult> {
    params.validate_z()?;
    let n = check_sample(sample)?;
    if n % 2 == 0 {
        return Err(Error::InvalidParameter {
            name: "dim",
            reason: format!("T_z is defined on odd dimensions, got {n}"),
        });
    }
    let mut warnings = StatWarnings::default();
    let minus = sample.iter().filter(|g| g.det_sign() < 0).count() as u64;
    if minus > 0 {
        if !opts.allow_det_minus {
            return Err(Error::DeterminantMinusOne);
        }
        warnings.det_minus_overrides = minus;
    }
    let mut ws = EigenWorkspace::new(n);
    let mut prepared = Vec::with_capacity(sample.len());
    for g in sample {
        let s = cos_spectrum_with(g.matrix(), g.det_sign(), PAIRING_TOL, &mut ws)?;
        let p = prepare_spectrum(&s.x, params)?;
        if p.jittered {
            warnings.jitter_events += 1;
        }
        prepared.push(p);
    }
    let (value, sum_warnings) = t_z_prepared(&prepared, params);
    warnings.merge(&sum_warnings);

    let mut r = StatisticResult::new("tz", value, sample).param("z", params.z);
    r.warnings = warnings;
    if opts.pvalue {
        r.pvalue = Some(tz_null_pvalue(n / 2, params.z, value, opts.pvalue_draws, 0));
        r.pvalue_method = PValueMethod::NullMixtureMc;
    }
    Ok(r)
}

/// Type B double sum over prepared spectra. The warnings count kernel
/// evaluations flagged as possibly inaccurate, and saturation when a kernel
/// value or the sum leaves the `f64` range.
pub fn t_z_prepared(prepared: &[PreparedSpectrum], params: &KernelParams) -> (f64, StatWarnings) {
    let big_n = prepared.len();
    let mut warnings = StatWarnings::default();
    let mut note = |e: &crate::kernels::KernelEval| {
        warnings.precision_warnings += u64::from(e.precision_warning);
        warnings.saturated += u64::from(e.saturated);
    };
    let mut total = 0.0;
    for i in 0..big_n {
        let d = cauchy_kernel_prepared(KernelType::B, &prepared[i], &prepared[i], params);
        note(&d);
        let mut row = 0.0;
        for j in (i + 1)..big_n {
            let e = cauchy_kernel_prepared(KernelType::B, &prepared[i], &prepared[j], params);
            note(&e);
            row += e.value;
        }
        total += d.value + 2.0 * row;
    }
    let mut value = total / big_n as f64;
    if !value.is_finite() {
        // T_z is a sum of squares in exact arithmetic, so overflow is upward
        warnings.saturated += 1;
        value = f64::MAX;
    }
    (value, warnings)
}

/// Full-group statistic `U_{z,q} = (1/N) Σ_{k,l} f(g_k g_lᵀ)` for SO(2m+1)
/// (type B) or SO(2m) (type D).
pub fn u_zq(sample: &[GroupElement], params: &KernelParams) -> Result<StatisticResult> {
    params.validate_zq()?;
    let n = check_sample(sample)?;
    let det = sample[0].det_sign();
    if sample.iter().any(|g| g.det_sign() != det) {
        return Err(Error::MixedDeterminants);
    }
    let kind = KernelType::orthogonal(n);
    let rank = n / 2;
    let consts = UqConstants::new(kind, rank, params)?;
    let diagonal = consts.value(&vec![1.0; rank]);
    let mut ws = EigenWorkspace::new(n);
    let big_n = sample.len();
    let mut off = 0.0;
    for k in 0..big_n {
        let mut row = 0.0;
        for l in (k + 1)..big_n {
            let s = relative_spectrum_with(&sample[k], &sample[l], PAIRING_TOL, &mut ws)?;
            row += consts.value(&s.x);
        }
        off += row;
    }
    let value = diagonal + 2.0 * off / big_n as f64;
    let mut r = StatisticResult::new("uzq", value, sample)
        .param("z", params.z)
        .param("q", params.q);
    if let Some(b) = params.rank_bound {
        r = r.param("rank_bound", b as f64);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element_u_is_diagonal_constant() {
        let p = KernelParams::with_zq(0.2, 0.4);
        let r = u_zq(&[GroupElement::identity(5)], &p).unwrap();
        let expect = crate::kernels::uq_weight_sum(KernelType::B, &[1.0, 1.0], &p).unwrap();
        assert!((r.value - expect).abs() < 1e-14);
    }

    #[test]
    fn t_z_rejects_even_dimension_and_det_minus() {
        let p = KernelParams::with_z(0.5);
        let o = StatOptions::default();
        assert!(t_z(&[GroupElement::identity(4)], &p, &o).is_err());
        let m = crate::linalg::Matrix::from_diagonal(&[1.0, 1.0, -1.0]);
        let g = GroupElement::new_unchecked(m, -1);
        assert_eq!(t_z(std::slice::from_ref(&g), &p, &o), Err(Error::DeterminantMinusOne));
        let allow = StatOptions {
            allow_det_minus: true,
            ..o
        };
        let r = t_z(&[g], &p, &allow).unwrap();
        assert_eq!(r.warnings.det_minus_overrides, 1);
    }

    #[test]
    fn t_z_at_identity_matches_closed_form() {
        let p = KernelParams::with_z(0.5);
        let r = t_z(&[GroupElement::identity(3)], &p, &StatOptions::default()).unwrap();
        assert!((r.value - 33.0).abs() < 1e-10);
    }

    #[test]
    fn t_z_saturates_on_identity_samples_in_high_dimension() {
        // ln K(I, I) is about 1500 at rank 25
        let sample = vec![GroupElement::identity(51); 3];
        let r = t_z(&sample, &KernelParams::with_z(0.5), &StatOptions::default()).unwrap();
        assert_eq!(r.value, f64::MAX);
        assert!(r.warnings.saturated > 0);
        assert_eq!(r.warnings.jitter_events, 3);
    }

    #[test]
    fn mixed_determinants_rejected() {
        let m = crate::linalg::Matrix::from_diagonal(&[1.0, 1.0, -1.0]);
        let g = GroupElement::new_unchecked(m, -1);
        let r = u_zq(&[g, GroupElement::identity(3)], &KernelParams::with_zq(0.2, 0.4));
        assert_eq!(r, Err(Error::MixedDeterminants));
    }
}
