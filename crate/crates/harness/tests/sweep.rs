use std::time::Instant;

use orthogof::nulldist::ad_ksample;
use orthogof::samplers::{SamplerKind, Steps};
use orthogof::statistics::StatisticSpec;
use orthogof_harness::{
    emit_report, estimate_power, histogram_rows, read_report, run_sweep, simulate_reference, ExperimentConfig,
    HaarReference, OutputFormat,
};

fn small(sampler: SamplerKind, steps: &[usize], stats: Vec<StatisticSpec>, reps: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(5, 10, sampler, steps.iter().map(|&k| Steps::Count(k)).collect(), stats);
    c.replicates = reps;
    c.seed = 11;
    c.asymptotic_draws = 2000;
    c
}

#[test]
fn kac_zero_steps_rayleigh_is_n_squared() {
    // identity samples give n·N·n; the n² of a single matrix scales with N
    for n_samples in [1, 10] {
        let mut c = small(SamplerKind::Kac, &[0], vec![StatisticSpec::Rayleigh], 6);
        c.sample_size = n_samples;
        let report = run_sweep(&c).unwrap();
        let cell = report.cell("0", "rayleigh").unwrap();
        assert_eq!(cell.alternative.values.len(), 6);
        for v in &cell.alternative.values {
            assert_eq!(v.unwrap(), 25.0 * n_samples as f64);
        }
    }
}

#[test]
fn reports_are_byte_identical_across_runs_and_threads() {
    let mut c = small(
        SamplerKind::Reflections,
        &[2, 6],
        vec![StatisticSpec::Gine, StatisticSpec::Tz { z: 0.5 }],
        8,
    );
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    for (i, d) in dirs.iter().enumerate() {
        c.threads = if i == 2 { 2 } else { 1 };
        let r = run_sweep(&c).unwrap();
        emit_report(&r, d.path(), &[OutputFormat::Csv, OutputFormat::Json]).unwrap();
    }
    for name in ["detail.csv", "reference.csv", "summary.csv", "histogram.csv"] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        assert_eq!(a, std::fs::read(dirs[1].path().join(name)).unwrap(), "{name}");
        assert_eq!(a, std::fs::read(dirs[2].path().join(name)).unwrap(), "{name} across threads");
    }
    // the JSON echoes the thread budget, so only the repeat run is byte-compared
    assert_eq!(
        std::fs::read(dirs[0].path().join("report.json")).unwrap(),
        std::fs::read(dirs[1].path().join("report.json")).unwrap()
    );
}

#[test]
fn detail_rows_and_summary_shape() {
    let c = small(
        SamplerKind::Kac,
        &[1, 5, 20],
        vec![StatisticSpec::Rayleigh, StatisticSpec::Gine],
        10,
    );
    let r = run_sweep(&c).unwrap();
    let d = tempfile::tempdir().unwrap();
    emit_report(&r, d.path(), &[OutputFormat::Csv]).unwrap();
    let detail = std::fs::read_to_string(d.path().join("detail.csv")).unwrap();
    let mut lines = detail.lines();
    assert_eq!(lines.next().unwrap(), "sampler,step,statistic,replicate,value");
    assert_eq!(lines.count(), 60);
    let summary = std::fs::read_to_string(d.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("step,statistic,ad_stat,ad_pvalue,power_05"));
    assert_eq!(summary.lines().count(), 7);
    for cell in &r.cells {
        let p = cell.power.unwrap();
        assert!((0.0..=1.0).contains(&p));
        assert_eq!(cell.alternative.values.len(), 10);
    }
}

#[test]
fn json_report_round_trips_config() {
    let mut c = small(SamplerKind::Jor, &[3], vec![StatisticSpec::Expfam { reference: None }], 5);
    c.steps.push(Steps::Jor { m1: 2, m2: 2 });
    let r = run_sweep(&c).unwrap();
    let d = tempfile::tempdir().unwrap();
    emit_report(&r, d.path(), &[OutputFormat::Json]).unwrap();
    let back = read_report(&d.path().join("report.json")).unwrap();
    assert_eq!(back.config, c);
    assert_eq!(back.cells, r.cells);
    assert_eq!(back.reference, r.reference);
    let echoed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(echoed["config"]["seed"], 11);
    let reparsed = ExperimentConfig::from_json(&echoed["config"].to_string()).unwrap();
    assert_eq!(reparsed, c);
}

#[test]
fn cached_reference_is_reused() {
    let cache = tempfile::tempdir().unwrap();
    let mut c = small(SamplerKind::Kac, &[4], vec![StatisticSpec::Rayleigh], 12);
    c.haar_reference = HaarReference::Cached {
        path: cache.path().to_path_buf(),
    };
    let first = run_sweep(&c).unwrap();
    assert!(!first.timings.reference_cached);
    let second = run_sweep(&c).unwrap();
    assert!(second.timings.reference_cached);
    assert_eq!(first.reference, second.reference);
    assert_eq!(first.cells, second.cells);

    c.seed += 1;
    let third = run_sweep(&c).unwrap();
    assert!(!third.timings.reference_cached);
    assert_ne!(third.reference, first.reference);
    assert_eq!(std::fs::read_dir(cache.path()).unwrap().count(), 2);
}

#[test]
fn statistic_failures_stay_in_their_cell() {
    // one reflection has determinant −1, where T_z is undefined
    let c = small(
        SamplerKind::Reflections,
        &[1, 2],
        vec![StatisticSpec::Tz { z: 0.5 }, StatisticSpec::Rayleigh],
        4,
    );
    let r = run_sweep(&c).unwrap();
    let bad = r.cell("1", "tz(z=0.5)").unwrap();
    assert_eq!(bad.alternative.errors.len(), 4);
    assert!(bad.power.is_none());
    assert!(r.cell("1", "rayleigh").unwrap().power.is_some());
    assert!(r.cell("2", "tz(z=0.5)").unwrap().power.is_some());
}

#[test]
fn haar_self_comparison_pvalues_are_uniform() {
    let mut c = ExperimentConfig::new(3, 10, SamplerKind::Haar, vec![Steps::Count(0)], vec![StatisticSpec::Rayleigh]);
    c.replicates = 50;
    let trials = 200;
    let mut p: Vec<f64> = (0..trials)
        .map(|t| {
            c.seed = 2 * t;
            let a = simulate_reference(&c)[0].finite();
            c.seed = 2 * t + 1;
            let b = simulate_reference(&c)[0].finite();
            ad_ksample(&[&a, &b]).unwrap().pvalue
        })
        .collect();
    p.sort_by(f64::total_cmp);
    let ks = p
        .iter()
        .enumerate()
        .map(|(i, &x)| ((i + 1) as f64 / trials as f64 - x).max(x - i as f64 / trials as f64))
        .fold(0.0, f64::max);
    // 1% critical value of the one-sample KS statistic at n = 200
    assert!(ks < 1.63 / (trials as f64).sqrt(), "ks = {ks}");
}

#[test]
fn estimate_power_edge_cases() {
    let null: Vec<f64> = (0..1000).map(f64::from).collect();
    let p = estimate_power(&null, &null, 0.05).unwrap();
    assert!((p - 0.05).abs() <= 0.002, "{p}");
    let above: Vec<f64> = null.iter().map(|x| x + 5000.0).collect();
    assert_eq!(estimate_power(&above, &null, 0.05).unwrap(), 1.0);
}

/// Best of three, so that a busy machine does not inflate one measurement.
fn alternative_secs(c: &ExperimentConfig) -> f64 {
    (0..3)
        .map(|_| run_sweep(c).unwrap().timings.steps.iter().map(|s| s.1).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn runtime_scales_roughly_linearly() {
    let mut c = ExperimentConfig::new(11, 30, SamplerKind::Kac, vec![Steps::Count(40)], vec![StatisticSpec::Gine]);
    c.threads = 1;
    c.replicates = 60;
    let base = alternative_secs(&c);
    c.replicates = 240;
    let more_reps = alternative_secs(&c);
    c.replicates = 60;
    c.steps = vec![Steps::Count(40); 4];
    let more_steps = alternative_secs(&c);
    for (what, ratio) in [("replicates", more_reps / base), ("grid", more_steps / base)] {
        assert!((2.0..10.0).contains(&ratio), "{what}: 4x work took {ratio}x time");
    }
}

#[test]
fn tz_haar_histogram_peaks_near_median() {
    let t0 = Instant::now();
    let mut c = ExperimentConfig::new(
        51,
        200,
        SamplerKind::Haar,
        vec![Steps::Count(0)],
        vec![StatisticSpec::Tz { z: 0.5 }],
    );
    c.replicates = 200;
    c.histogram_bins = 12;
    c.asymptotic_draws = 20_000;
    let r = run_sweep(&c).unwrap();
    let rows: Vec<_> = histogram_rows(&r).into_iter().filter(|h| h.cohort == "null").collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(rows.iter().map(|h| h.count).sum::<usize>(), 200);
    let mode = rows.iter().max_by_key(|h| h.count).unwrap();
    let centre = 0.5 * (mode.bin_left + mode.bin_right);
    println!("mode bin [{:.3}, {:.3}) in {:.1}s", mode.bin_left, mode.bin_right, t0.elapsed().as_secs_f64());
    assert!((centre - 2.2).abs() <= 0.5, "mode centre {centre}");
}
