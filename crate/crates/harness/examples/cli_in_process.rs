//! Driving the command-line tool from code: draw a sample into a file, then
//! evaluate a statistic on it.

use orthogof_harness::cli::main_with_args;

fn run(args: &[&str]) -> i32 {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with_args(args.iter().copied(), &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    code
}

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let out = dir.path().to_string_lossy().into_owned();
    let code = run(&[
        "orthogof", "sample", "--sampler", "jor", "--dim", "9", "--steps", "1", "--count", "20", "--seed", "3",
        "--out", &out,
    ]);
    println!("sample exited with {code}");

    let sample = std::fs::read_dir(dir.path())?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .next()
        .ok_or("sample produced no file")?;
    let input = sample.to_string_lossy().into_owned();
    let code = run(&["orthogof", "stat", "--input", &input, "--statistic", "tz", "--z", "0.5", "--pvalue"]);
    println!("stat exited with {code}");

    let code = run(&["orthogof", "null-quantiles", "--n", "4", "--z", "0.5", "--draws", "20000", "--format", "json"]);
    println!("null-quantiles exited with {code}");

    // a usage error maps to exit code 1
    let code = run(&["orthogof", "sample", "--dim", "9"]);
    println!("missing --sampler exited with {code}");
    Ok(())
}
