//! The closed-form kernels against their character series, and their
//! behaviour on tied spectra.

use orthogof::kernels::{cauchy_kernel, kernel_series_oracle, KernelParams, KernelPrecision, KernelType};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let theta = [0.3, 1.1, 2.5];
    let phi = [0.7, 1.9, 2.2];
    let x: Vec<f64> = theta.iter().map(|t: &f64| t.cos()).collect();
    let y: Vec<f64> = phi.iter().map(|t: &f64| t.cos()).collect();
    let z = 0.3;
    let params = KernelParams::with_z(z);

    for kind in [KernelType::B, KernelType::C] {
        let closed = cauchy_kernel(kind, &x, &y, &params)?;
        let series = kernel_series_oracle(kind, &theta, &phi, z, 40)?;
        println!("{kind:?}: closed form {closed:.12}, series to weight 40 {series:.12}");
    }

    // the identity has all cosines tied at 1; ties are resolved by a tiny
    // deterministic spread and evaluated through divided differences
    let ones = [1.0; 4];
    let auto = cauchy_kernel(KernelType::B, &ones, &ones, &KernelParams::with_z(0.5))?;
    let dd = cauchy_kernel(
        KernelType::B,
        &ones,
        &ones,
        &KernelParams::with_z(0.5).precision(KernelPrecision::DoubleDouble),
    )?;
    println!("K(I, I) in SO(9), z = 0.5: {auto:.12e} (double-double {dd:.12e})");

    match cauchy_kernel(KernelType::B, &ones, &ones, &KernelParams::with_z(0.5).strict()) {
        Ok(v) => println!("strict mode unexpectedly returned {v}"),
        Err(e) => println!("strict mode: {e}"),
    }
    Ok(())
}
