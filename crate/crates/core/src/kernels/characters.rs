//! Weyl character formulas, used only to check the closed-form kernels.

use num_complex::Complex64;

use super::KernelType;
use crate::error::{Error, Result};
use crate::linalg::lu::log_det;

/// A partition `λ₁ ≥ … ≥ λ_r > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Parts padded with zeros to length `m`.
    fn padded(&self, m: usize) -> Vec<u32> {
        let mut p = self.0.clone();
        p.resize(m, 0);
        p
    }
}

/// All partitions of weight at most `max_weight` with at most `max_parts` parts,
/// including the empty partition.
pub fn partitions_up_to(max_weight: u32, max_parts: usize) -> Vec<Partition> {
    fn rec(rem: u32, max_part: u32, max_parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        out.push(Partition(cur.clone()));
        if cur.len() == max_parts {
            return;
        }
        for p in (1..=rem.min(max_part)).rev() {
            cur.push(p);
            rec(rem - p, p, max_parts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_weight, max_weight, max_parts, &mut Vec::new(), &mut out);
    out
}

fn sine_ratio(lambda: &Partition, theta: &[f64], shift: f64) -> Result<f64> {
    let m = theta.len();
    if lambda.len() > m {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: format!("{} parts exceed rank {m}", lambda.len()),
        });
    }
    if m == 0 {
        return Ok(1.0);
    }
    let lam = lambda.padded(m);
    let mut num = vec![0.0; m * m];
    let mut den = vec![0.0; m * m];
    for (i, &t) in theta.iter().enumerate() {
        for j in 0..m {
            let base = (m - 1 - j) as f64 + shift;
            num[i * m + j] = ((f64::from(lam[j]) + base) * t).sin();
            den[i * m + j] = (base * t).sin();
        }
    }
    let d = log_det(&den, m);
    if d.is_zero() || !d.logmag.is_finite() {
        return Err(Error::DegenerateAngles);
    }
    Ok((log_det(&num, m) / d).value())
}

/// Irreducible character at a torus element with the given eigen-angles.
/// Types B and C use the Weyl character formula; type A returns the real part
/// of the Schur function (see [`character_a`]).
pub fn character(kind: KernelType, lambda: &Partition, theta: &[f64]) -> Result<f64> {
    match kind {
        KernelType::B => sine_ratio(lambda, theta, 0.5),
        KernelType::C => sine_ratio(lambda, theta, 1.0),
        KernelType::A => character_a(lambda, theta).map(|c| c.re),
        KernelType::D => Err(Error::InvalidParameter {
            name: "kind",
            reason: "no character oracle for type D".into(),
        }),
    }
}

fn complex_det(mut a: Vec<Complex64>, m: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..m {
        let piv = (k..m)
            .max_by(|&i, &j| a[i * m + k].norm().total_cmp(&a[j * m + k].norm()))
            .unwrap_or(k);
        if a[piv * m + k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != k {
            for j in 0..m {
                a.swap(k * m + j, piv * m + j);
            }
            det = -det;
        }
        let p = a[k * m + k];
        det *= p;
        for i in (k + 1)..m {
            let f = a[i * m + k] / p;
            for j in (k + 1)..m {
                let t = a[k * m + j];
                a[i * m + j] -= f * t;
            }
        }
    }
    det
}

/// Schur function `s_λ(e^{iθ_1}, …, e^{iθ_m})` as a bialternant ratio.
pub fn character_a(lambda: &Partition, theta: &[f64]) -> Result<Complex64> {
    let m = theta.len();
    if lambda.len() > m {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: format!("{} parts exceed rank {m}", lambda.len()),
        });
    }
    let lam = lambda.padded(m);
    let mut num = Vec::with_capacity(m * m);
    let mut den = Vec::with_capacity(m * m);
    for &t in theta {
        for j in 0..m {
            let base = (m - 1 - j) as f64;
            num.push(Complex64::from_polar(1.0, (f64::from(lam[j]) + base) * t));
            den.push(Complex64::from_polar(1.0, base * t));
        }
    }
    let d = complex_det(den, m);
    if d.norm() < 1e-300 {
        return Err(Error::DegenerateAngles);
    }
    Ok(complex_det(num, m) / d)
}

/// Truncated series `Σ_{0<|λ|≤L} z^{|λ|} χ_λ(θ) χ_λ(φ)` (type A: `χ_λ(θ)·conj χ_λ(φ)`,
/// real part). Inputs are eigen-angles.
pub fn kernel_series_oracle(
    kind: KernelType,
    theta: &[f64],
    phi: &[f64],
    z: f64,
    max_weight: u32,
) -> Result<f64> {
    if theta.len() != phi.len() {
        return Err(Error::DimensionMismatch {
            expected: theta.len(),
            found: phi.len(),
        });
    }
    let mut sum = 0.0;
    for lambda in partitions_up_to(max_weight, theta.len()) {
        if lambda.is_empty() {
            continue;
        }
        let w = z.powi(lambda.weight() as i32);
        let term = if kind == KernelType::A {
            (character_a(&lambda, theta)? * character_a(&lambda, phi)?.conj()).re
        } else {
            character(kind, &lambda, theta)? * character(kind, &lambda, phi)?
        };
        sum += w * term;
    }
    Ok(sum)
}
