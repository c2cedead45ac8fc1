//! The spectral statistic T_z with its limiting-law p-value, and the
//! full-group statistic U_{z,q}, on Kac walks of increasing length.

use orthogof::kernels::KernelParams;
use orthogof::rng::RngStream;
use orthogof::samplers::{SamplerKind, SamplerSpec};
use orthogof::statistics::{t_z, u_zq, StatOptions};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (dim, n) = (9, 60);
    let opts = StatOptions {
        pvalue: true,
        pvalue_draws: 20_000,
        ..StatOptions::default()
    };
    let tz = KernelParams::with_z(0.5);
    let uzq = KernelParams::with_zq(0.2, 0.4);

    println!("{:<10} {:>10} {:>8} {:>12}", "sampler", "T_z", "p", "U_zq");
    for (kind, steps) in [
        (SamplerKind::Kac, 5),
        (SamplerKind::Kac, 15),
        (SamplerKind::Kac, 60),
        (SamplerKind::Haar, 0),
    ] {
        let sample = SamplerSpec::new(kind, dim, steps).draw_sample(n, &RngStream::from_seed(8));
        let t = t_z(&sample, &tz, &opts)?;
        let u = u_zq(&sample, &uzq)?;
        println!(
            "{:<10} {:>10.3} {:>8.4} {:>12.3}",
            format!("{kind:?}({steps})"),
            t.value,
            t.pvalue.unwrap_or(f64::NAN),
            u.value
        );
        if !t.warnings.is_clean() {
            println!("  warnings: {:?}", t.warnings);
        }
    }
    Ok(())
}
