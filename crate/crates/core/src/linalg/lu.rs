use super::dd::DoubleDouble;
use super::signed_log::SignedLog;

/// Signed log-determinant of a square row-major matrix via LU with partial pivoting.
/// The buffer is overwritten by the factorization.
pub fn log_det_in_place(a: &mut [f64], n: usize) -> SignedLog {
    debug_assert_eq!(a.len(), n * n);
    let mut sign: i8 = 1;
    let mut logmag = 0.0;
    for k in 0..n {
        let mut piv = k;
        let mut best = a[k * n + k].abs();
        for i in (k + 1)..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return SignedLog::ZERO;
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            sign = -sign;
        }
        let p = a[k * n + k];
        if p < 0.0 {
            sign = -sign;
        }
        logmag += p.abs().ln();
        let inv = 1.0 / p;
        for i in (k + 1)..n {
            let f = a[i * n + k] * inv;
            if f == 0.0 {
                continue;
            }
            let (top, bottom) = a.split_at_mut(i * n);
            let pivot_row = &top[k * n + k + 1..k * n + n];
            let row = &mut bottom[k + 1..n];
            for (r, &pr) in row.iter_mut().zip(pivot_row) {
                *r -= f * pr;
            }
        }
    }
    SignedLog::new(sign, logmag)
}

pub fn log_det(a: &[f64], n: usize) -> SignedLog {
    let mut buf = a.to_vec();
    log_det_in_place(&mut buf, n)
}

/// Double-double variant of [`log_det_in_place`].
pub fn log_det_dd_in_place(a: &mut [DoubleDouble], n: usize) -> SignedLog {
    debug_assert_eq!(a.len(), n * n);
    let mut sign: i8 = 1;
    let mut logmag = 0.0;
    for k in 0..n {
        let mut piv = k;
        let mut best = a[k * n + k].abs().hi;
        for i in (k + 1)..n {
            let v = a[i * n + k].abs().hi;
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return SignedLog::ZERO;
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            sign = -sign;
        }
        let p = a[k * n + k];
        sign *= p.signum();
        logmag += p.ln_abs();
        for i in (k + 1)..n {
            let f = a[i * n + k] / p;
            if f.is_zero() {
                continue;
            }
            for j in (k + 1)..n {
                let t = a[k * n + j];
                a[i * n + j] = a[i * n + j] - f * t;
            }
        }
    }
    SignedLog::new(sign, logmag)
}

/// Solves `A x = b` for a symmetric positive definite `A` by Cholesky.
/// Returns `None` if `A` is not numerically positive definite.
pub fn cholesky_solve(a: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_determinants() {
        let a = [2.0, 1.0, 1.0, 3.0];
        assert!((log_det(&a, 2).value() - 5.0).abs() < 1e-12);
        let swap = [0.0, 1.0, 1.0, 0.0];
        let d = log_det(&swap, 2);
        assert_eq!(d.sign, -1);
        assert!(d.logmag.abs() < 1e-15);
        let singular = [1.0, 2.0, 2.0, 4.0];
        assert!(log_det(&singular, 2).is_zero());
    }

    #[test]
    fn dd_agrees_with_f64_on_well_conditioned_input() {
        let a = [4.0, -2.0, 1.0, 3.0, 6.0, -4.0, 2.0, 1.0, 8.0];
        let f = log_det(&a, 3);
        let mut b: Vec<DoubleDouble> = a.iter().map(|&x| x.into()).collect();
        let g = log_det_dd_in_place(&mut b, 3);
        assert_eq!(f.sign, g.sign);
        assert!((f.logmag - g.logmag).abs() < 1e-13);
        assert!((f.value() - 263.0).abs() < 1e-10);
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let a = [4.0, 2.0, 2.0, 3.0];
        let x = cholesky_solve(&a, 2, &[2.0, 1.0]).unwrap();
        assert!((4.0 * x[0] + 2.0 * x[1] - 2.0).abs() < 1e-14);
        assert!((2.0 * x[0] + 3.0 * x[1] - 1.0).abs() < 1e-14);
        assert!(cholesky_solve(&[1.0, 2.0, 2.0, 1.0], 2, &[1.0, 1.0]).is_none());
    }
}
