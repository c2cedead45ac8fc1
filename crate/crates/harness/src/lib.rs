//! Configuration-driven Monte Carlo sweeps comparing random-rotation
//! generators against Haar samples, with CSV/JSON report emission and the
//! `orthogof` command-line tool.

pub mod cache;
pub mod cli;
pub mod config;
pub mod error;
pub mod report;
pub mod sweep;

pub use config::{ExperimentConfig, HaarReference};
pub use error::{HarnessError, Result};
pub use orthogof::nulldist::estimate_power;
pub use report::{emit_report, histogram_rows, read_report, HistogramRow, OutputFormat};
pub use sweep::{run_sweep, simulate_reference, AsymptoticCutoff, CohortValues, SweepCell, SweepReport, Timings};
