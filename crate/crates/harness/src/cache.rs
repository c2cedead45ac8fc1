//! On-disk cache of Haar reference cohorts.

use std::path::{Path, PathBuf};

use orthogof::rng::RNG_ALGORITHM;
use orthogof::statistics::StatOptions;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, HaarReference};
use crate::error::{HarnessError, Result};
use crate::sweep::{simulate_reference, CohortValues};

/// Everything the reference values depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    pub dim: usize,
    pub sample_size: usize,
    pub replicates: usize,
    pub statistics: Vec<String>,
    pub seed: u64,
    pub options: StatOptions,
    pub rng_algorithm: String,
}

impl CacheKey {
    pub fn of(config: &ExperimentConfig) -> Self {
        Self {
            dim: config.dim,
            sample_size: config.sample_size,
            replicates: config.replicates,
            statistics: config.statistics.iter().map(|s| s.id()).collect(),
            seed: config.seed,
            options: config.options,
            rng_algorithm: RNG_ALGORITHM.to_string(),
        }
    }

    /// File name inside the cache directory.
    pub fn file_name(&self) -> String {
        let stats: String = self
            .statistics
            .join("+")
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' })
            .collect();
        format!(
            "haar_n{}_N{}_R{}_seed{}_{}.json",
            self.dim, self.sample_size, self.replicates, self.seed, stats
        )
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    key: CacheKey,
    reference: Vec<CohortValues>,
}

/// Path of the cache file a config would use, if caching is on.
pub fn cache_path(config: &ExperimentConfig) -> Option<PathBuf> {
    match &config.haar_reference {
        HaarReference::Fresh => None,
        HaarReference::Cached { path } => Some(path.join(CacheKey::of(config).file_name())),
    }
}

fn load(path: &Path, key: &CacheKey) -> Result<Option<Vec<CohortValues>>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(HarnessError::io(path, e)),
    };
    // an unreadable or stale entry is recomputed and overwritten
    Ok(serde_json::from_str::<CacheEntry>(&text)
        .ok()
        .filter(|e| &e.key == key)
        .map(|e| e.reference))
}

/// Reference cohort for `config`, and whether it came from the cache.
pub fn reference_cohort(config: &ExperimentConfig) -> Result<(Vec<CohortValues>, bool)> {
    let Some(path) = cache_path(config) else {
        return Ok((simulate_reference(config), false));
    };
    let key = CacheKey::of(config);
    if let Some(reference) = load(&path, &key)? {
        return Ok((reference, true));
    }
    let reference = simulate_reference(config);
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    let entry = CacheEntry { key, reference };
    let text = serde_json::to_string(&entry).expect("cache entry serializes");
    std::fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
    Ok((entry.reference, false))
}
