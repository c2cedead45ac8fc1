//! Rayleigh, Giné and trace-power statistics on short Kac walks and on Haar
//! samples of the same size.

use orthogof::rng::RngStream;
use orthogof::samplers::{SamplerKind, SamplerSpec};
use orthogof::statistics::{gine, rayleigh_with, trace_power};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (dim, n) = (7, 40);
    println!("{:<10} {:>10} {:>8} {:>10} {:>10}", "sampler", "rayleigh", "p", "gine", "E Tr g^2");
    for (kind, steps) in [
        (SamplerKind::Kac, 2),
        (SamplerKind::Kac, 10),
        (SamplerKind::Kac, 40),
        (SamplerKind::Haar, 0),
    ] {
        let sample = SamplerSpec::new(kind, dim, steps).draw_sample(n, &RngStream::from_seed(5));
        let r = rayleigh_with(&sample, true)?;
        let g = gine(&sample)?;
        let t2 = trace_power(&sample, 2)?;
        println!(
            "{:<10} {:>10.2} {:>8.3} {:>10.3} {:>10.3}",
            format!("{kind:?}({steps})"),
            r.value,
            r.pvalue.unwrap_or(f64::NAN),
            g.value,
            t2.value
        );
    }
    Ok(())
}
