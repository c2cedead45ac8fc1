use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::sweep::SweepReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// One histogram bin of one cohort.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub statistic: String,
    pub step: String,
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: usize,
    pub cohort: String,
}

/// Equal-width bins over the pooled range of the two cohorts, so that null
/// and alternative histograms of a cell can be overlaid directly.
pub fn histogram_rows(report: &SweepReport) -> Vec<HistogramRow> {
    let bins = report.config.histogram_bins;
    let mut rows = Vec::new();
    for cell in &report.cells {
        let stat = &cell.alternative.statistic;
        let null = report.reference_for(stat).map(|c| c.finite()).unwrap_or_default();
        let alt = cell.alternative.finite();
        let pooled = null.iter().chain(&alt);
        let (lo, hi) = pooled.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            continue;
        }
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        let width = (hi - lo) / bins as f64;
        for (cohort, values) in [("null", &null), ("alternative", &alt)] {
            let mut counts = vec![0usize; bins];
            for &v in values.iter() {
                let b = (((v - lo) / width) as usize).min(bins - 1);
                counts[b] += 1;
            }
            for (b, count) in counts.into_iter().enumerate() {
                rows.push(HistogramRow {
                    statistic: stat.clone(),
                    step: cell.step_label.clone(),
                    bin_left: lo + b as f64 * width,
                    bin_right: if b + 1 == bins { hi } else { lo + (b + 1) as f64 * width },
                    count,
                    cohort: cohort.to_string(),
                });
            }
        }
    }
    rows
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => HarnessError::io(path, io),
        other => HarnessError::Usage(format!("{other:?}")),
    })
}

fn write_detail(report: &SweepReport, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["sampler", "step", "statistic", "replicate", "value"])?;
    let sampler = format!("{:?}", report.config.sampler).to_lowercase();
    for cell in &report.cells {
        for (r, v) in cell.alternative.values.iter().enumerate() {
            w.write_record([
                sampler.as_str(),
                &cell.step_label,
                &cell.alternative.statistic,
                &r.to_string(),
                &opt(*v),
            ])?;
        }
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

fn write_reference(report: &SweepReport, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["statistic", "replicate", "value"])?;
    for c in &report.reference {
        for (r, v) in c.values.iter().enumerate() {
            w.write_record([c.statistic.as_str(), &r.to_string(), &opt(*v)])?;
        }
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

fn write_summary(report: &SweepReport, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "step",
        "statistic",
        "ad_stat",
        "ad_pvalue",
        "power_05",
        "ad_raw",
        "haar_cutoff",
        "tz_asymptotic_cutoff",
        "tz_asymptotic_power",
        "failed_replicates",
    ])?;
    for c in &report.cells {
        w.write_record([
            c.step_label.clone(),
            c.alternative.statistic.clone(),
            opt(c.ad.map(|a| a.statistic)),
            opt(c.ad.map(|a| a.pvalue)),
            opt(c.power),
            opt(c.ad.map(|a| a.raw)),
            opt(c.haar_cutoff),
            opt(c.tz_asymptotic.map(|t| t.cutoff)),
            opt(c.tz_asymptotic.map(|t| t.power)),
            c.alternative.errors.len().to_string(),
        ])?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

fn write_histogram(report: &SweepReport, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    for row in histogram_rows(report) {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

type WriteCsv = fn(&SweepReport, &Path) -> Result<()>;

/// Writes the report into `dir`.
///
/// CSV: `detail.csv`, `reference.csv`, `summary.csv`, `histogram.csv`.
/// JSON: `report.json`. Wall-clock timings always go to `timings.json`,
/// apart from everything else, which is reproducible byte for byte.
pub fn emit_report(report: &SweepReport, dir: &Path, formats: &[OutputFormat]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut written = Vec::new();
    for f in formats {
        match f {
            OutputFormat::Csv => {
                let files: [(&str, WriteCsv); 4] = [
                    ("detail.csv", write_detail),
                    ("reference.csv", write_reference),
                    ("summary.csv", write_summary),
                    ("histogram.csv", write_histogram),
                ];
                for (name, write) in files {
                    let p = dir.join(name);
                    write(report, &p)?;
                    written.push(p);
                }
            }
            OutputFormat::Json => {
                let p = dir.join("report.json");
                write_text(&p, &serde_json::to_string_pretty(report).expect("report serializes"))?;
                written.push(p);
            }
        }
    }
    let p = dir.join("timings.json");
    write_text(&p, &serde_json::to_string_pretty(&report.timings).expect("timings serialize"))?;
    written.push(p);
    Ok(written)
}

/// Reads a report written by [`emit_report`] in JSON form.
pub fn read_report(path: &Path) -> Result<SweepReport> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Config(e.to_string()))
}
