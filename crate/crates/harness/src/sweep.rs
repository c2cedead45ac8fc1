use std::time::Instant;

use orthogof::linalg::GroupElement;
use orthogof::nulldist::{ad_ksample, estimate_power, null_cutoff, tz_null_quantile, AdResult};
use orthogof::rng::{RngStream, RNG_ALGORITHM};
use orthogof::samplers::{SamplerKind, SamplerSpec, Steps};
use orthogof::statistics::{StatOptions, StatWarnings, StatisticSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache;
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

/// Split index of the Haar reference cohort under the master stream.
pub const HAAR_COHORT: u64 = 0;
/// Split index of the chain under test.
pub const ALTERNATIVE_COHORT: u64 = 1;

/// A replicate whose statistic could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateError {
    pub replicate: usize,
    pub message: String,
}

/// Values of one statistic over the replicates of one cohort.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortValues {
    pub statistic: String,
    /// One entry per replicate; `None` where evaluation failed.
    pub values: Vec<Option<f64>>,
    pub errors: Vec<ReplicateError>,
    pub warnings: StatWarnings,
}

impl CohortValues {
    /// The successfully computed values, in replicate order.
    pub fn finite(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }
}

/// Cutoff of the limiting T_z null law and the power against it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCutoff {
    pub cutoff: f64,
    pub mc_stderr: f64,
    pub power: f64,
}

/// One (step, statistic) cell of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub step: Steps,
    pub step_label: String,
    pub alternative: CohortValues,
    pub ad: Option<AdResult>,
    pub ad_error: Option<String>,
    /// Fraction of replicates above the empirical Haar `1 − α` quantile.
    pub power: Option<f64>,
    /// The empirical Haar cutoff used for `power`.
    pub haar_cutoff: Option<f64>,
    pub tz_asymptotic: Option<AsymptoticCutoff>,
}

/// Wall-clock timings. Kept out of the JSON report so that reports are
/// reproducible byte for byte.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub reference_secs: f64,
    pub reference_cached: bool,
    pub steps: Vec<(String, f64)>,
    pub total_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: ExperimentConfig,
    pub rng_algorithm: String,
    pub reference: Vec<CohortValues>,
    pub cells: Vec<SweepCell>,
    #[serde(skip)]
    pub timings: Timings,
}

impl SweepReport {
    pub fn cell(&self, step: &str, statistic: &str) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| c.step_label == step && c.alternative.statistic == statistic)
    }

    pub fn reference_for(&self, statistic: &str) -> Option<&CohortValues> {
        self.reference.iter().find(|c| c.statistic == statistic)
    }
}

type Evaluated = Vec<std::result::Result<(f64, StatWarnings), String>>;

fn evaluate_all(sample: &[GroupElement], stats: &[StatisticSpec], opts: &StatOptions) -> Evaluated {
    stats
        .iter()
        .map(|s| {
            s.evaluate(sample, opts)
                .map(|r| (r.value, r.warnings))
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// Simulates `replicates` samples from `spec` under `root`, replicate `r`
/// drawing from `root.split(r)`, and evaluates every statistic on each.
pub fn simulate_cohort(
    spec: &SamplerSpec,
    config: &ExperimentConfig,
    root: &RngStream,
) -> Vec<CohortValues> {
    let per_rep: Vec<Evaluated> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let sample = spec.draw_sample(config.sample_size, &root.split(r as u64));
            evaluate_all(&sample, &config.statistics, &config.options)
        })
        .collect();
    config
        .statistics
        .iter()
        .enumerate()
        .map(|(s, stat)| {
            let mut cohort = CohortValues {
                statistic: stat.id(),
                values: Vec::with_capacity(config.replicates),
                errors: Vec::new(),
                warnings: StatWarnings::default(),
            };
            for (r, rep) in per_rep.iter().enumerate() {
                match &rep[s] {
                    Ok((v, w)) => {
                        cohort.values.push(Some(*v));
                        cohort.warnings.merge(w);
                    }
                    Err(message) => {
                        cohort.values.push(None);
                        cohort.errors.push(ReplicateError {
                            replicate: r,
                            message: message.clone(),
                        });
                    }
                }
            }
            cohort
        })
        .collect()
}

/// Haar reference cohort of a config, without caching.
pub fn simulate_reference(config: &ExperimentConfig) -> Vec<CohortValues> {
    let spec = SamplerSpec::new(SamplerKind::Haar, config.dim, 0);
    let root = RngStream::from_seed(config.seed).split_path(&[HAAR_COHORT, 0]);
    simulate_cohort(&spec, config, &root)
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::Usage(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Runs every grid step against the Haar reference.
///
/// Results depend only on the config (including its seed): replicates are
/// independent work units with their own RNG streams, and all aggregation
/// happens in replicate order.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepReport> {
    config.validate()?;
    in_pool(config.threads, || run_sweep_inner(config))?
}

fn run_sweep_inner(config: &ExperimentConfig) -> Result<SweepReport> {
    let start = Instant::now();
    let mut timings = Timings::default();
    let (reference, cached) = cache::reference_cohort(config)?;
    timings.reference_secs = start.elapsed().as_secs_f64();
    timings.reference_cached = cached;

    let asymptotic = asymptotic_cutoffs(config);
    let master = RngStream::from_seed(config.seed);
    let mut cells = Vec::new();
    for (s, &step) in config.steps.iter().enumerate() {
        let t0 = Instant::now();
        let spec = config.sampler_spec(step);
        let root = master.split_path(&[ALTERNATIVE_COHORT, s as u64]);
        let cohorts = simulate_cohort(&spec, config, &root);
        for ((alt, reference), tz) in cohorts.into_iter().zip(&reference).zip(&asymptotic) {
            cells.push(compare(step, alt, reference, config.alpha, *tz));
        }
        timings.steps.push((step.label(), t0.elapsed().as_secs_f64()));
    }
    timings.total_secs = start.elapsed().as_secs_f64();
    Ok(SweepReport {
        config: config.clone(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        reference,
        cells,
        timings,
    })
}

/// `(cutoff, stderr)` of the limiting law for each T_z statistic on odd dimension.
fn asymptotic_cutoffs(config: &ExperimentConfig) -> Vec<Option<(f64, f64)>> {
    config
        .statistics
        .iter()
        .map(|s| match *s {
            StatisticSpec::Tz { z } if config.dim % 2 == 1 => tz_null_quantile(
                config.dim / 2,
                z,
                1.0 - config.alpha,
                config.asymptotic_draws,
                config.seed,
            )
            .ok()
            .map(|q| (q.quantile, q.mc_stderr)),
            _ => None,
        })
        .collect()
}

fn compare(
    step: Steps,
    alternative: CohortValues,
    reference: &CohortValues,
    alpha: f64,
    tz: Option<(f64, f64)>,
) -> SweepCell {
    let alt = alternative.finite();
    let null = reference.finite();
    let (ad, ad_error) = match ad_ksample(&[&alt, &null]) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let power = estimate_power(&alt, &null, alpha).ok();
    let haar_cutoff = (!null.is_empty()).then(|| null_cutoff(&null, alpha));
    let tz_asymptotic = tz.filter(|_| !alt.is_empty()).map(|(cutoff, mc_stderr)| AsymptoticCutoff {
        cutoff,
        mc_stderr,
        power: alt.iter().filter(|&&v| v > cutoff).count() as f64 / alt.len() as f64,
    });
    SweepCell {
        step,
        step_label: step.label(),
        alternative,
        ad,
        ad_error,
        power,
        haar_cutoff,
        tz_asymptotic,
    }
}
