use num_complex::Complex64;

use super::confluent::{self, Real};
use super::{prepare_spectrum, KernelParams, KernelType, PreparedSpectrum};
use crate::error::{Error, Result};
use crate::linalg::dd::DoubleDouble;
use crate::linalg::SignedLog;

/// A kernel value with evaluation metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub value: f64,
    pub used_double_double: bool,
    /// The requested precision may not deliver ~1e-8 relative accuracy.
    pub precision_warning: bool,
    /// The value exceeded the `f64` range and is reported as `±f64::MAX`.
    pub saturated: bool,
}

/// Closed-form kernel on cosine spectra (types B, C, D) or on eigen-angles
/// (type A, real part returned).
pub fn cauchy_kernel(kind: KernelType, x: &[f64], y: &[f64], params: &KernelParams) -> Result<f64> {
    params.validate_z()?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if kind == KernelType::A {
        return Ok(cauchy_kernel_a(x, y, params.z).re);
    }
    let px = prepare_spectrum(x, params)?;
    let py = prepare_spectrum(y, params)?;
    Ok(cauchy_kernel_prepared(kind, &px, &py, params).value)
}

/// `∏_{i,j} 1/(1 − z e^{i(θ_i − φ_j)}) − 1` on eigen-angles of unitary matrices.
pub fn cauchy_kernel_a(theta: &[f64], phi: &[f64], z: f64) -> Complex64 {
    let mut log = Complex64::new(0.0, 0.0);
    for &t in theta {
        for &p in phi {
            let w = Complex64::from_polar(z, t - p);
            log -= (Complex64::new(1.0, 0.0) - w).ln();
        }
    }
    log.exp() - 1.0
}

// The entries are written as sums of non-negative terms in (1 − z)², 1 − cd,
// 1 + c and (c − d)², so nothing cancels as z → 1 or at coincident cosines.

#[inline]
fn denom(c: f64, d: f64, z: f64) -> f64 {
    let w = (1.0 - z) * (1.0 - z);
    w * w + 4.0 * z * w * (1.0 - c * d) + 4.0 * z * z * (c - d) * (c - d)
}

#[inline]
pub(super) fn entry(kind: KernelType, c: f64, d: f64, z: f64) -> f64 {
    let den = denom(c, d, z);
    let w = (1.0 - z) * (1.0 - z);
    match kind {
        KernelType::B => (w + 2.0 * z * ((1.0 + c) + (1.0 + d))) / den,
        KernelType::C => 1.0 / den,
        KernelType::D => 2.0 + 2.0 * (1.0 - z * z) * (w + 2.0 * z * (1.0 - c * d)) / den,
        KernelType::A => unreachable!("type A has no determinant form"),
    }
}

pub(super) fn entry_dd(kind: KernelType, c: f64, d: f64, z: f64) -> DoubleDouble {
    let one = DoubleDouble::ONE;
    let zd = DoubleDouble::from_f64(z);
    let cd = DoubleDouble::from_f64(c);
    let dd = DoubleDouble::from_f64(d);
    let omz = one - zd;
    let w = omz * omz;
    let one_m_cd = one - cd * dd;
    let diff = cd - dd;
    let den = w * w + (zd * w * one_m_cd).mul_f64(4.0) + (zd * zd * diff * diff).mul_f64(4.0);
    match kind {
        KernelType::B => (w + (zd * ((one + cd) + (one + dd))).mul_f64(2.0)) / den,
        KernelType::C => one / den,
        KernelType::D => {
            let num = ((one - zd * zd) * (w + (zd * one_m_cd).mul_f64(2.0))).mul_f64(2.0);
            DoubleDouble::from_f64(2.0) + num / den
        }
        KernelType::A => unreachable!("type A has no determinant form"),
    }
}

fn plain_log_det<T: Real>(kind: KernelType, c: &[f64], d: &[f64], z: f64) -> SignedLog {
    let mut a: Vec<T> = Vec::with_capacity(c.len() * d.len());
    for &x in c {
        for &y in d {
            a.push(T::entry(kind, x, y, z));
        }
    }
    T::log_det(&mut a, c.len())
}

/// Determinant kernel on prepared spectra of equal rank.
pub fn cauchy_kernel_prepared(
    kind: KernelType,
    px: &PreparedSpectrum,
    py: &PreparedSpectrum,
    params: &KernelParams,
) -> KernelEval {
    let m = px.m();
    debug_assert_eq!(m, py.m());
    let z = params.z;
    let largest = px.largest_cluster().max(py.largest_cluster());
    let (use_dd, precision_warning) = params.resolve_precision_clustered(m, largest);
    let det = match (use_dd, px.is_separated() && py.is_separated()) {
        (false, true) => plain_log_det::<f64>(kind, &px.c, &py.c, z),
        (true, true) => plain_log_det::<DoubleDouble>(kind, &px.c, &py.c, z),
        (false, false) => confluent::log_det::<f64>(kind, &px.c, &px.clusters, &py.c, &py.clusters, z),
        (true, false) => confluent::log_det::<DoubleDouble>(kind, &px.c, &px.clusters, &py.c, &py.clusters, z),
    };
    let pairs = (m * m.saturating_sub(1) / 2) as f64;
    let prefactor = match kind {
        KernelType::B => m as f64 * (-z).ln_1p(),
        KernelType::C => m as f64 * (-z * z).ln_1p(),
        _ => 0.0,
    };
    let scale = SignedLog::new(1, prefactor - pairs * (4.0 * z).ln());
    let total = det * scale / (px.divisor * py.divisor);
    let value = if total.is_zero() {
        -1.0
    } else if total.sign > 0 {
        total.logmag.exp_m1()
    } else {
        -total.logmag.exp() - 1.0
    };
    let saturated = value.is_infinite();
    let value = if saturated { f64::MAX.copysign(value) } else { value };
    KernelEval {
        value,
        used_double_double: use_dd,
        precision_warning,
        saturated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelPrecision;

    #[test]
    fn type_b_identity_closed_form() {
        for k in 1..10 {
            let z = k as f64 / 10.0;
            let v = cauchy_kernel(KernelType::B, &[1.0], &[1.0], &KernelParams::with_z(z)).unwrap();
            let expect = (1.0 + 6.0 * z + z * z) / (1.0 - z).powi(3) - 1.0;
            assert!((v - expect).abs() < 1e-10 * expect.max(1.0), "z={z}");
        }
    }

    #[test]
    fn type_a_single_phase() {
        let v = cauchy_kernel(KernelType::A, &[0.0], &[0.0], &KernelParams::with_z(0.5)).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cosine_forms_match_complex_factors() {
        // type C and D entries against the literal four-factor expressions at m = 1
        let z = 0.37;
        for &(t, p) in &[(0.3, 1.2), (2.0, 0.1), (1.0, 1.0)] {
            let (c, d) = (f64::cos(t), f64::cos(p));
            let x = Complex64::from_polar(1.0, t);
            let y = Complex64::from_polar(1.0, p);
            let one = Complex64::new(1.0, 0.0);
            let f = |a: Complex64| one - z * a;
            let prod = f(x * y) * f(y / x) * f(x / y) * f(one / (x * y));
            let c_entry = (one / prod).re;
            assert!((entry(KernelType::C, c, d, z) - c_entry).abs() < 1e-13);
            let sum = one / f(x * y) + one / f(y / x) + one / f(x / y) + one / f(one / (x * y));
            assert!((entry(KernelType::D, c, d, z) - sum.re).abs() < 1e-13);
            assert!(sum.im.abs() < 1e-13);
        }
    }

    #[test]
    fn double_double_agrees_with_double_when_easy() {
        let x = [0.9, 0.2, -0.5];
        let y = [0.7, 0.1, -0.8];
        for kind in [KernelType::B, KernelType::C, KernelType::D] {
            let a = cauchy_kernel(kind, &x, &y, &KernelParams::with_z(0.5).precision(KernelPrecision::Double)).unwrap();
            let b = cauchy_kernel(kind, &x, &y, &KernelParams::with_z(0.5).precision(KernelPrecision::DoubleDouble)).unwrap();
            assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()), "{kind:?}: {a} vs {b}");
        }
    }

    #[test]
    fn mismatched_ranks() {
        assert!(cauchy_kernel(KernelType::B, &[0.1], &[0.1, 0.2], &KernelParams::default()).is_err());
    }
}
