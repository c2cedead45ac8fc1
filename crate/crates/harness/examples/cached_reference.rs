//! Reusing a Haar reference cohort across runs. The second sweep reads the
//! reference from disk and reports the same numbers.

use orthogof::samplers::{SamplerKind, Steps};
use orthogof::statistics::StatisticSpec;
use orthogof_harness::{run_sweep, ExperimentConfig, HaarReference};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = tempfile::tempdir()?;
    let mut config = ExperimentConfig::new(
        9,
        25,
        SamplerKind::Reflections,
        vec![Steps::Count(6), Steps::Count(30)],
        vec![StatisticSpec::Gine, StatisticSpec::Trace { k: 1 }],
    );
    config.replicates = 30;
    config.seed = 5;
    config.haar_reference = HaarReference::Cached {
        path: cache.path().to_path_buf(),
    };

    let first = run_sweep(&config)?;
    let second = run_sweep(&config)?;
    for (run, r) in [("first", &first), ("second", &second)] {
        println!(
            "{run}: reference from cache {}, reference took {:.3}s",
            r.timings.reference_cached, r.timings.reference_secs
        );
    }
    println!(
        "identical results: {}",
        first.reference == second.reference && first.cells == second.cells
    );
    for cell in &second.cells {
        println!(
            "Reflections({}) {}: AD p {:.2e}",
            cell.step_label,
            cell.alternative.statistic,
            cell.ad.map_or(f64::NAN, |a| a.pvalue)
        );
    }
    Ok(())
}
