//! Runs every example so that they keep working, not just compiling.

#[path = "../examples/cached_reference.rs"]
mod cached_reference;
#[path = "../examples/cli_in_process.rs"]
mod cli_in_process;
#[path = "../examples/kac_sweep.rs"]
mod kac_sweep;

#[test]
fn kac_sweep_example() {
    kac_sweep::main().unwrap();
}

#[test]
fn cached_reference_example() {
    cached_reference::main().unwrap();
}

#[test]
fn cli_in_process_example() {
    cli_in_process::main().unwrap();
}
