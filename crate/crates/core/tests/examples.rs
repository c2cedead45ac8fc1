//! Runs every example so that they keep working, not just compiling.

#[path = "../examples/classical_tests.rs"]
mod classical_tests;
#[path = "../examples/expfam.rs"]
mod expfam;
#[path = "../examples/null_distribution.rs"]
mod null_distribution;
#[path = "../examples/samplers.rs"]
mod samplers;
#[path = "../examples/spectra.rs"]
mod spectra;
#[path = "../examples/spectral_tests.rs"]
mod spectral_tests;

#[test]
fn samplers_example() {
    samplers::main();
}

#[test]
fn spectra_example() {
    spectra::main().unwrap();
}

#[test]
fn kernels_example() {
    kernels::main().unwrap();
}

#[test]
fn classical_tests_example() {
    classical_tests::main().unwrap();
}

#[test]
fn expfam_example() {
    expfam::main().unwrap();
}

#[test]
fn spectral_tests_example() {
    spectral_tests::main().unwrap();
}

#[test]
fn null_distribution_example() {
    null_distribution::main().unwrap();
}
