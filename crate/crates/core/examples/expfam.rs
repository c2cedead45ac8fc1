//! The exponential-family score test on products of random reflections.

use orthogof::rng::RngStream;
use orthogof::samplers::{SamplerKind, SamplerSpec};
use orthogof::statistics::{expfam_statistic, selberg_derivatives, ExpFamParams};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dim = 15;
    let haar = ExpFamParams::SO_ODD;
    let d = selberg_derivatives(dim / 2, haar)?;
    println!("gradient of the log-normalizer at Haar, SO({dim}): {:.4?}", d.gradient);

    for steps in [4, 8, 16, 64] {
        let spec = SamplerSpec::new(SamplerKind::Reflections, dim, steps);
        let sample = spec.draw_sample(100, &RngStream::from_seed(21));
        let r = expfam_statistic(&sample)?;
        println!(
            "Reflections({steps:>2}): statistic {:>9.2}, chi-square(3) p-value {:.3e}",
            r.value,
            r.pvalue.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
