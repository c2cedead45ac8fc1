//! Eigenvalue cosines of group elements, the trace identity they satisfy,
//! and the plain-text sample format.

use orthogof::linalg::{cos_spectrum, read_samples, relative_spectrum, write_samples, ORTHOGONALITY_TOL};
use orthogof::rng::RngStream;
use orthogof::samplers::{SamplerKind, SamplerSpec};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SamplerSpec::new(SamplerKind::Kac, 7, 30);
    let sample = spec.draw_sample(3, &RngStream::from_seed(11));

    let s = cos_spectrum(&sample[0])?;
    println!("cosines of a Kac(30) element in SO(7): {:.4?}", s.x);
    println!("angles: {:.4?}", s.angles());
    println!(
        "1 + 2 sum cos = {:.12}, trace = {:.12}",
        1.0 + 2.0 * s.x.iter().sum::<f64>(),
        sample[0].trace()
    );

    // the spectrum of g hᵀ is what the pairwise statistics consume
    let r = relative_spectrum(&sample[0], &sample[1])?;
    println!("cosines of g0 g1^T: {:.4?}", r.x);

    let mut buf = Vec::new();
    write_samples(&mut buf, &sample)?;
    let back = read_samples(buf.as_slice(), ORTHOGONALITY_TOL)?;
    let drift = sample
        .iter()
        .zip(&back)
        .map(|(a, b)| a.matrix().max_abs_diff(b.matrix()))
        .fold(0.0, f64::max);
    println!("wrote {} bytes, read back {} elements, max drift {drift:.1e}", buf.len(), back.len());
    Ok(())
}
