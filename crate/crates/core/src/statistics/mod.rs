//! Test statistics mapping a sample of group elements to a number.

mod classical;
mod expfam;
mod selberg;
mod spectral;
mod trace;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use classical::{gine, rayleigh, rayleigh_with};
pub use expfam::{chi2_3_survival, expfam_statistic, expfam_statistic_with, spectrum_sufficient};
pub use selberg::{selberg_derivatives, ExpFamParams, SelbergDerivatives};
pub use spectral::{t_z, t_z_prepared, u_zq};
pub use trace::trace_power;

use crate::error::{Error, Result};
use crate::kernels::{KernelParams, KernelPrecision};
use crate::linalg::GroupElement;

/// How a p-value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PValueMethod {
    #[default]
    None,
    /// Asymptotic χ² with three degrees of freedom.
    Chi2_3,
    /// Asymptotic χ² with `n²` degrees of freedom.
    Chi2,
    /// Monte Carlo draws from the limiting chi-square mixture.
    NullMixtureMc,
    /// Comparison against simulated Haar replicates.
    EmpiricalReference,
}

/// Counters for numerical events that did not abort the computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StatWarnings {
    pub jitter_events: u64,
    pub det_minus_overrides: u64,
    pub clamped_logs: u64,
    pub precision_warnings: u64,
    /// Values beyond the `f64` range, reported as `±f64::MAX`.
    pub saturated: u64,
}

impl StatWarnings {
    pub fn is_clean(&self) -> bool {
        *self == StatWarnings::default()
    }

    pub fn merge(&mut self, other: &StatWarnings) {
        self.jitter_events += other.jitter_events;
        self.det_minus_overrides += other.det_minus_overrides;
        self.clamped_logs += other.clamped_logs;
        self.precision_warnings += other.precision_warnings;
        self.saturated += other.saturated;
    }
}

/// A statistic value with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticResult {
    pub statistic: String,
    pub value: f64,
    /// Sample size.
    pub sample_size: usize,
    /// Matrix dimension.
    pub dim: usize,
    pub params: BTreeMap<String, f64>,
    pub pvalue: Option<f64>,
    pub pvalue_method: PValueMethod,
    pub warnings: StatWarnings,
}

impl StatisticResult {
    pub(crate) fn new(statistic: &str, value: f64, sample: &[GroupElement]) -> Self {
        Self {
            statistic: statistic.to_string(),
            value,
            sample_size: sample.len(),
            dim: sample.first().map_or(0, GroupElement::dim),
            params: BTreeMap::new(),
            pvalue: None,
            pvalue_method: PValueMethod::None,
            warnings: StatWarnings::default(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

/// Options shared by all statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StatOptions {
    /// Fail on coincident cosines instead of jittering them.
    pub strict_degenerate: bool,
    /// Accept determinant −1 elements where SO(n) is required.
    pub allow_det_minus: bool,
    /// Compute a per-sample p-value where one is available.
    pub pvalue: bool,
    /// Mixture draws used for the T_z p-value.
    pub pvalue_draws: usize,
    pub precision: KernelPrecision,
}

impl Default for StatOptions {
    fn default() -> Self {
        Self {
            strict_degenerate: false,
            allow_det_minus: false,
            pvalue: false,
            pvalue_draws: 100_000,
            precision: KernelPrecision::Auto,
        }
    }
}

impl StatOptions {
    pub(crate) fn kernel_params(&self, z: f64, q: f64) -> KernelParams {
        let mut p = KernelParams::with_zq(z, q);
        p.precision = self.precision;
        if self.strict_degenerate {
            p = p.strict();
        }
        p
    }
}

/// A statistic together with its parameters, as named in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum StatisticSpec {
    Rayleigh,
    Gine,
    Expfam {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reference: Option<ExpFamParams>,
    },
    Tz {
        z: f64,
    },
    Uzq {
        z: f64,
        q: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rank_bound: Option<usize>,
    },
    Trace {
        k: u32,
    },
}

impl StatisticSpec {
    /// Short stable identifier such as `tz(z=0.5)`.
    pub fn id(&self) -> String {
        match self {
            StatisticSpec::Rayleigh => "rayleigh".into(),
            StatisticSpec::Gine => "gine".into(),
            StatisticSpec::Expfam { .. } => "expfam".into(),
            StatisticSpec::Tz { z } => format!("tz(z={z})"),
            StatisticSpec::Uzq { z, q, .. } => format!("uzq(z={z},q={q})"),
            StatisticSpec::Trace { k } => format!("trace(k={k})"),
        }
    }

    pub fn evaluate(&self, sample: &[GroupElement], opts: &StatOptions) -> Result<StatisticResult> {
        match *self {
            StatisticSpec::Rayleigh => rayleigh_with(sample, opts.pvalue),
            StatisticSpec::Gine => gine(sample),
            StatisticSpec::Expfam { reference } => expfam_statistic_with(sample, reference, opts),
            StatisticSpec::Tz { z } => t_z(sample, &opts.kernel_params(z, 0.5), opts),
            StatisticSpec::Uzq { z, q, rank_bound } => {
                let mut p = opts.kernel_params(z, q);
                p.rank_bound = rank_bound;
                u_zq(sample, &p)
            }
            StatisticSpec::Trace { k } => trace_power(sample, k),
        }
    }
}

/// Common checks: nonempty and uniform dimension.
pub(crate) fn check_sample(sample: &[GroupElement]) -> Result<usize> {
    let first = sample.first().ok_or(Error::EmptySample)?;
    let n = first.dim();
    for g in sample {
        if g.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.dim(),
            });
        }
    }
    Ok(n)
}
