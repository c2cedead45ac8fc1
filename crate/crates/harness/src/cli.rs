//! Command-line front end.

use std::ffi::OsString;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use orthogof::linalg::{read_samples, validate_group_element, write_samples, GroupElement, Matrix, ORTHOGONALITY_TOL};
use orthogof::nulldist::{ad_ksample, estimate_power, null_cutoff, tz_null_quantiles};
use orthogof::rng::RngStream;
use orthogof::samplers::{SamplerKind, SamplerSpec, Steps};
use orthogof::statistics::{selberg_derivatives, ExpFamParams, StatOptions, StatisticResult, StatisticSpec};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::report::{emit_report, OutputFormat};
use crate::sweep::run_sweep;

#[derive(Debug, Parser)]
#[command(name = "orthogof", version, about = "Goodness-of-fit tests for Haar measure on orthogonal groups")]
pub struct Cli {
    /// Experiment config (sweep) or statistic spec (stat), as JSON.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed; overrides the seed in --config. Defaults to 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory. Without it, results go to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a sample of matrices.
    Sample(SampleArgs),
    /// Evaluate one statistic on a sample file.
    Stat(StatArgs),
    /// Run a full experiment from --config.
    Sweep,
    /// Quantiles of the limiting T_z null law on SO(2n+1).
    NullQuantiles(NullQuantileArgs),
    /// Power and Anderson–Darling comparison of two value files.
    Power(PowerArgs),
    /// Selberg normalizer with its gradient and Hessian.
    ExpfamCalib(CalibArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_sampler)]
    pub sampler: SamplerKind,
    #[arg(long)]
    pub dim: usize,
    /// Chain length `k`, or `m1+m2` for JOR.
    #[arg(long, default_value = "0", value_parser = parse_steps)]
    pub steps: Steps,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct StatArgs {
    /// Sample file in the text matrix format or JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// rayleigh, gine, expfam, tz, uzq or trace.
    #[arg(long)]
    pub statistic: Option<String>,
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub rank_bound: Option<usize>,
    #[arg(long)]
    pub strict_degenerate: bool,
    #[arg(long)]
    pub allow_det_minus: bool,
    /// Also compute a p-value where one is available.
    #[arg(long)]
    pub pvalue: bool,
}

#[derive(Debug, Args)]
pub struct NullQuantileArgs {
    /// Rank n; the group is SO(2n+1).
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub z: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.9,0.95,0.99")]
    pub probs: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub draws: usize,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// Statistic values under the alternative, one per line.
    #[arg(long)]
    pub alt: PathBuf,
    /// Statistic values under the null, one per line.
    #[arg(long)]
    pub null: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct CalibArgs {
    /// Rank n.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = ExpFamParams::SO_ODD.gamma)]
    pub gamma: f64,
    #[arg(long, default_value_t = ExpFamParams::SO_ODD.alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = ExpFamParams::SO_ODD.beta)]
    pub beta: f64,
    /// N in the covariance `Σ = ∇²𝒜 / N`.
    #[arg(long, default_value_t = 200)]
    pub sample_size: usize,
}

fn parse_sampler(s: &str) -> std::result::Result<SamplerKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_lowercase()))
        .map_err(|_| format!("unknown sampler `{s}` (haar, kac, reflections, jor)"))
}

fn parse_steps(s: &str) -> std::result::Result<Steps, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad step count `{t}`: {e}"));
    match s.split_once('+') {
        Some((a, b)) => Ok(Steps::Jor { m1: num(a)?, m2: num(b)? }),
        None => Ok(Steps::Count(num(s)?)),
    }
}

/// JSON form of a sample file.
#[derive(Debug, Serialize, Deserialize)]
pub struct SampleFile {
    pub dim: usize,
    /// Row-major entries of each matrix.
    pub matrices: Vec<Vec<f64>>,
}

/// Reads a sample in either the text matrix format or [`SampleFile`] JSON.
pub fn read_sample_file(path: &Path) -> Result<Vec<GroupElement>> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    if text.trim_start().starts_with('{') {
        let f: SampleFile = serde_json::from_str(&text).map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?;
        return f
            .matrices
            .into_iter()
            .map(|m| {
                if m.len() != f.dim * f.dim {
                    return Err(orthogof::Error::DimensionMismatch {
                        expected: f.dim * f.dim,
                        found: m.len(),
                    }
                    .into());
                }
                Ok(validate_group_element(Matrix::from_row_major(f.dim, f.dim, m), ORTHOGONALITY_TOL)?)
            })
            .collect();
    }
    Ok(read_samples(text.as_bytes(), ORTHOGONALITY_TOL)?)
}

/// Reads one number per line; blank lines, `#` comments and a non-numeric
/// header line are skipped. For comma-separated lines the last field is used.
pub fn read_values(path: &Path) -> Result<Vec<f64>> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| HarnessError::io(path, e))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let field = t.rsplit(',').next().unwrap_or(t).trim();
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if out.is_empty() && i == 0 => continue,
            Err(e) => {
                return Err(HarnessError::Usage(format!("{}:{}: {e}", path.display(), i + 1)));
            }
        }
    }
    Ok(out)
}

struct Output {
    dir: Option<PathBuf>,
    format: OutputFormat,
}

impl Output {
    /// Writes `text` to `dir/stem.ext`, or to `stdout` without a directory.
    fn emit(&self, stem: &str, text: &str, stdout: &mut dyn Write) -> Result<()> {
        match &self.dir {
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
                let ext = match self.format {
                    OutputFormat::Csv => "csv",
                    OutputFormat::Json => "json",
                };
                let p = dir.join(format!("{stem}.{ext}"));
                std::fs::write(&p, text).map_err(|e| HarnessError::io(&p, e))
            }
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| HarnessError::io(Path::new("<stdout>"), e)),
        }
    }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn statistic_from_args(a: &StatArgs, config: Option<&Path>) -> Result<Vec<StatisticSpec>> {
    if let Some(path) = config {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| HarnessError::Config(e.to_string()))?;
        let parsed = if v.is_array() {
            serde_json::from_value(v)
        } else {
            serde_json::from_value(v).map(|s| vec![s])
        };
        return parsed.map_err(|e| HarnessError::Config(e.to_string()));
    }
    let name = a
        .statistic
        .as_deref()
        .ok_or_else(|| HarnessError::Usage("stat needs --statistic or --config".into()))?;
    let spec = match name.to_lowercase().as_str() {
        "rayleigh" => StatisticSpec::Rayleigh,
        "gine" => StatisticSpec::Gine,
        "expfam" => StatisticSpec::Expfam { reference: None },
        "tz" => StatisticSpec::Tz { z: a.z.unwrap_or(0.5) },
        "uzq" => StatisticSpec::Uzq {
            z: a.z.unwrap_or(0.2),
            q: a.q.unwrap_or(0.4),
            rank_bound: a.rank_bound,
        },
        "trace" => StatisticSpec::Trace { k: a.k.unwrap_or(1) },
        other => return Err(HarnessError::Usage(format!("unknown statistic `{other}`"))),
    };
    Ok(vec![spec])
}

fn stat_rows(results: &[StatisticResult]) -> Vec<Vec<String>> {
    results
        .iter()
        .map(|r| {
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            vec![
                r.statistic.clone(),
                r.value.to_string(),
                r.sample_size.to_string(),
                r.dim.to_string(),
                r.pvalue.map_or_else(String::new, |p| p.to_string()),
                serde_json::to_value(r.pvalue_method).expect("serializes").as_str().unwrap_or("").to_string(),
                params.join(";"),
                r.warnings.jitter_events.to_string(),
                r.warnings.det_minus_overrides.to_string(),
                r.warnings.clamped_logs.to_string(),
                r.warnings.precision_warnings.to_string(),
                r.warnings.saturated.to_string(),
            ]
        })
        .collect()
}

#[derive(Serialize)]
struct PowerRecord {
    alpha: f64,
    power: f64,
    haar_cutoff: f64,
    ad_statistic: f64,
    ad_raw: f64,
    ad_pvalue: f64,
    n_alt: usize,
    n_null: usize,
}

#[derive(Serialize)]
struct CalibRecord {
    n: usize,
    gamma: f64,
    alpha: f64,
    beta: f64,
    value: f64,
    gradient: [f64; 3],
    hessian: [[f64; 3]; 3],
    sample_size: usize,
    sigma: [[f64; 3]; 3],
}

/// Runs a parsed command line, writing results to `stdout` or `--out`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let out = Output {
        dir: cli.out.clone(),
        format: cli.format.unwrap_or(OutputFormat::Json),
    };
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Sample(a) => {
            let spec = SamplerSpec::new(a.sampler, a.dim, a.steps);
            spec.validate()?;
            let sample = spec.draw_sample(a.count, &RngStream::from_seed(seed));
            let text = match out.format {
                OutputFormat::Json => json_text(&SampleFile {
                    dim: a.dim,
                    matrices: sample.iter().map(|g| g.matrix().as_slice().to_vec()).collect(),
                }),
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    write_samples(&mut buf, &sample)?;
                    String::from_utf8(buf).expect("sample text is utf-8")
                }
            };
            out.emit("sample", &text, stdout)
        }
        Command::Stat(a) => {
            let specs = statistic_from_args(a, cli.config.as_deref())?;
            let sample = read_sample_file(&a.input)?;
            let opts = StatOptions {
                strict_degenerate: a.strict_degenerate,
                allow_det_minus: a.allow_det_minus,
                pvalue: a.pvalue,
                ..StatOptions::default()
            };
            let results = specs
                .iter()
                .map(|s| s.evaluate(&sample, &opts))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let text = match out.format {
                OutputFormat::Json => results
                    .iter()
                    .map(|r| serde_json::to_string(r).expect("result serializes") + "\n")
                    .collect(),
                OutputFormat::Csv => csv_text(
                    &[
                        "statistic",
                        "value",
                        "sample_size",
                        "dim",
                        "pvalue",
                        "pvalue_method",
                        "params",
                        "jitter_events",
                        "det_minus_overrides",
                        "clamped_logs",
                        "precision_warnings",
                        "saturated",
                    ],
                    &stat_rows(&results),
                )?,
            };
            out.emit("stat", &text, stdout)
        }
        Command::Sweep => {
            let path = cli
                .config
                .as_deref()
                .ok_or_else(|| HarnessError::Usage("sweep needs --config".into()))?;
            let mut config = ExperimentConfig::load(path)?;
            if let Some(s) = cli.seed {
                config.seed = s;
            }
            if let Some(t) = cli.threads {
                config.threads = t;
            }
            if let Some(d) = &cli.out {
                config.out_dir = Some(d.clone());
            }
            let dir = config
                .out_dir
                .clone()
                .ok_or_else(|| HarnessError::Usage("sweep needs --out or out_dir in the config".into()))?;
            let report = run_sweep(&config)?;
            let formats = match cli.format {
                Some(f) => vec![f],
                None => vec![OutputFormat::Csv, OutputFormat::Json],
            };
            let files = emit_report(&report, &dir, &formats)?;
            for f in files {
                writeln!(stdout, "{}", f.display()).map_err(|e| HarnessError::io(Path::new("<stdout>"), e))?;
            }
            Ok(())
        }
        Command::NullQuantiles(a) => {
            let q = tz_null_quantiles(a.n, a.z, &a.probs, a.draws, seed)?;
            let text = match out.format {
                OutputFormat::Json => json_text(&q),
                OutputFormat::Csv => csv_text(
                    &["prob", "quantile", "mc_stderr"],
                    &q.iter()
                        .map(|e| vec![e.prob.to_string(), e.quantile.to_string(), e.mc_stderr.to_string()])
                        .collect::<Vec<_>>(),
                )?,
            };
            out.emit("null_quantiles", &text, stdout)
        }
        Command::Power(a) => {
            let alt = read_values(&a.alt)?;
            let null = read_values(&a.null)?;
            let power = estimate_power(&alt, &null, a.alpha)?;
            let ad = ad_ksample(&[&alt, &null])?;
            let rec = PowerRecord {
                alpha: a.alpha,
                power,
                haar_cutoff: null_cutoff(&null, a.alpha),
                ad_statistic: ad.statistic,
                ad_raw: ad.raw,
                ad_pvalue: ad.pvalue,
                n_alt: alt.len(),
                n_null: null.len(),
            };
            let text = match out.format {
                OutputFormat::Json => json_text(&rec),
                OutputFormat::Csv => csv_text(
                    &["alpha", "power", "haar_cutoff", "ad_statistic", "ad_raw", "ad_pvalue", "n_alt", "n_null"],
                    &[vec![
                        rec.alpha.to_string(),
                        rec.power.to_string(),
                        rec.haar_cutoff.to_string(),
                        rec.ad_statistic.to_string(),
                        rec.ad_raw.to_string(),
                        rec.ad_pvalue.to_string(),
                        rec.n_alt.to_string(),
                        rec.n_null.to_string(),
                    ]],
                )?,
            };
            out.emit("power", &text, stdout)
        }
        Command::ExpfamCalib(a) => {
            if a.sample_size == 0 {
                return Err(HarnessError::Usage("--sample-size must be positive".into()));
            }
            let at = ExpFamParams::new(a.gamma, a.alpha, a.beta);
            let d = selberg_derivatives(a.n, at)?;
            let mut sigma = d.hessian;
            for row in &mut sigma {
                for v in row {
                    *v /= a.sample_size as f64;
                }
            }
            let rec = CalibRecord {
                n: a.n,
                gamma: a.gamma,
                alpha: a.alpha,
                beta: a.beta,
                value: d.value,
                gradient: d.gradient,
                hessian: d.hessian,
                sample_size: a.sample_size,
                sigma,
            };
            let text = match out.format {
                OutputFormat::Json => json_text(&rec),
                OutputFormat::Csv => {
                    let mut rows = vec![vec!["value".into(), String::new(), String::new(), d.value.to_string()]];
                    for i in 0..3 {
                        rows.push(vec!["gradient".into(), (i + 1).to_string(), String::new(), d.gradient[i].to_string()]);
                    }
                    for (name, m) in [("hessian", &d.hessian), ("sigma", &sigma)] {
                        for i in 0..3 {
                            for j in 0..3 {
                                rows.push(vec![name.into(), (i + 1).to_string(), (j + 1).to_string(), m[i][j].to_string()]);
                            }
                        }
                    }
                    csv_text(&["quantity", "i", "j", "value"], &rows)?
                }
            };
            out.emit("expfam_calib", &text, stdout)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
