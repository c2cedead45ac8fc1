use std::path::{Path, PathBuf};

use orthogof::samplers::{SamplerKind, SamplerSpec, Steps};
use orthogof::statistics::{StatOptions, StatisticSpec};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Where the Haar reference cohort comes from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum HaarReference {
    /// Simulated for every run.
    #[default]
    Fresh,
    /// Read from, or written to, a cache directory.
    Cached { path: PathBuf },
}

/// A full sweep experiment. Every field is echoed into the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Matrix dimension n.
    pub dim: usize,
    /// Matrices per sample, N.
    pub sample_size: usize,
    /// Replicates per grid cell, R.
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    pub sampler: SamplerKind,
    #[serde(default)]
    pub project_to_special: Option<bool>,
    /// Chain lengths to compare against the Haar reference.
    pub steps: Vec<Steps>,
    pub statistics: Vec<StatisticSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Worker threads; 0 uses all available cores.
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub haar_reference: HaarReference,
    #[serde(default)]
    pub options: StatOptions,
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
    /// Mixture draws for the asymptotic T_z cutoff.
    #[serde(default = "default_asymptotic_draws")]
    pub asymptotic_draws: usize,
}

fn default_replicates() -> usize {
    100
}

fn default_alpha() -> f64 {
    0.05
}

fn default_bins() -> usize {
    30
}

fn default_asymptotic_draws() -> usize {
    100_000
}

impl ExperimentConfig {
    /// Minimal config with defaults for everything optional.
    pub fn new(
        dim: usize,
        sample_size: usize,
        sampler: SamplerKind,
        steps: Vec<Steps>,
        statistics: Vec<StatisticSpec>,
    ) -> Self {
        Self {
            dim,
            sample_size,
            replicates: default_replicates(),
            sampler,
            project_to_special: None,
            steps,
            statistics,
            seed: 0,
            alpha: default_alpha(),
            threads: 0,
            out_dir: None,
            haar_reference: HaarReference::Fresh,
            options: StatOptions::default(),
            histogram_bins: default_bins(),
            asymptotic_draws: default_asymptotic_draws(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.replicates == 0 {
            return bad("replicates must be at least 1".into());
        }
        if self.sample_size == 0 {
            return bad("sample_size must be at least 1".into());
        }
        if self.steps.is_empty() {
            return bad("step grid is empty".into());
        }
        if self.statistics.is_empty() {
            return bad("no statistics configured".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.histogram_bins == 0 {
            return bad("histogram_bins must be positive".into());
        }
        self.sampler_spec(Steps::Count(0))
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Sampler for one grid step.
    pub fn sampler_spec(&self, steps: Steps) -> SamplerSpec {
        let mut s = SamplerSpec::new(self.sampler, self.dim, steps);
        s.project_to_special = self.project_to_special;
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_json_fills_defaults() {
        let c = ExperimentConfig::from_json(
            r#"{"dim": 5, "sample_size": 10, "sampler": "kac", "steps": [0, 10],
                "statistics": [{"name": "rayleigh"}]}"#,
        )
        .unwrap();
        assert_eq!(c.replicates, 100);
        assert_eq!(c.alpha, 0.05);
        assert_eq!(c.haar_reference, HaarReference::Fresh);
        assert_eq!(ExperimentConfig::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_configs() {
        let base = r#""dim": 5, "sample_size": 10, "sampler": "kac", "statistics": [{"name": "gine"}]"#;
        for extra in [r#""steps": []"#, r#""steps": [1], "replicates": 0"#, r#""steps": [1], "bogus": 1"#] {
            let text = format!("{{{base}, {extra}}}");
            assert!(matches!(
                ExperimentConfig::from_json(&text),
                Err(HarnessError::Config(_))
            ));
        }
    }
}
