use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{digamma, ln_gamma, trigamma};

/// Exponential-family parameters `(γ, α, β)` of the eigenvalue-cosine density
/// `∏|x_i − x_j|^{2γ} ∏(1 − x_i)^{α−1} (1 + x_i)^{β−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpFamParams {
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ExpFamParams {
    pub const fn new(gamma: f64, alpha: f64, beta: f64) -> Self {
        Self { gamma, alpha, beta }
    }

    /// Haar measure on SO(2m+1).
    pub const SO_ODD: ExpFamParams = ExpFamParams::new(1.0, 1.5, 0.5);
    /// Haar measure on SO(2m).
    pub const SO_EVEN: ExpFamParams = ExpFamParams::new(1.0, 0.5, 0.5);
    /// The determinant −1 coset of O(2m+1).
    pub const O_ODD_MINUS: ExpFamParams = ExpFamParams::new(1.0, 0.5, 1.5);
    /// The determinant −1 coset of O(2m), on its m−1 free angles.
    pub const O_EVEN_MINUS: ExpFamParams = ExpFamParams::new(1.0, 1.5, 1.5);

    fn validate(&self) -> Result<()> {
        for (name, value) in [("gamma", self.gamma), ("alpha", self.alpha), ("beta", self.beta)] {
            // also rejects NaN
            if value.is_nan() || value <= 0.0 {
                return Err(Error::NonPositiveParameter { name, value });
            }
        }
        Ok(())
    }
}

/// Log-normalizer of the family with its gradient and Hessian in `(γ, α, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelbergDerivatives {
    pub value: f64,
    pub gradient: [f64; 3],
    pub hessian: [[f64; 3]; 3],
}

/// Log of the Selberg integral over `[−1, 1]^n` and its first two derivatives.
pub fn selberg_derivatives(n: usize, at: ExpFamParams) -> Result<SelbergDerivatives> {
    at.validate()?;
    let ExpFamParams { gamma, alpha, beta } = at;
    let nf = n as f64;
    let ln2 = std::f64::consts::LN_2;
    let mut value = (gamma * nf * (nf - 1.0) + nf * (alpha + beta - 1.0)) * ln2;
    let mut g = [nf * (nf - 1.0) * ln2, nf * ln2, nf * ln2];
    let mut h = [[0.0; 3]; 3];
    let psi_1g = digamma(1.0 + gamma);
    let tri_1g = trigamma(1.0 + gamma);
    let lg_1g = ln_gamma(1.0 + gamma);
    for j in 0..n {
        let jf = j as f64;
        let a1 = 1.0 + gamma + jf * gamma;
        let aa = alpha + jf * gamma;
        let ab = beta + jf * gamma;
        let c = nf + jf - 1.0;
        let s = alpha + beta + gamma * c;
        value += ln_gamma(a1) + ln_gamma(aa) + ln_gamma(ab) - lg_1g - ln_gamma(s);

        let (p1, pa, pb, ps) = (digamma(a1), digamma(aa), digamma(ab), digamma(s));
        g[0] += (1.0 + jf) * p1 + jf * pa + jf * pb - psi_1g - c * ps;
        g[1] += pa - ps;
        g[2] += pb - ps;

        let (t1, ta, tb, ts) = (trigamma(a1), trigamma(aa), trigamma(ab), trigamma(s));
        h[0][0] += (1.0 + jf).powi(2) * t1 + jf * jf * ta + jf * jf * tb - tri_1g - c * c * ts;
        h[0][1] += jf * ta - c * ts;
        h[0][2] += jf * tb - c * ts;
        h[1][1] += ta - ts;
        h[2][2] += tb - ts;
        h[1][2] -= ts;
    }
    h[1][0] = h[0][1];
    h[2][0] = h[0][2];
    h[2][1] = h[1][2];
    Ok(SelbergDerivatives {
        value,
        gradient: g,
        hessian: h,
    })
}
