//! Draws from each generator and watches the first two trace moments
//! approach their Haar values `E Tr g = 0` and `E (Tr g)² = 1` as the chains
//! run longer.

use orthogof::rng::RngStream;
use orthogof::samplers::{SamplerKind, SamplerSpec, Steps};

fn trace_moments(spec: &SamplerSpec, draws: usize, seed: u64) -> (f64, f64) {
    let sample = spec.draw_sample(draws, &RngStream::from_seed(seed));
    let traces: Vec<f64> = sample.iter().map(|g| g.trace()).collect();
    let mean = traces.iter().sum::<f64>() / draws as f64;
    let second = traces.iter().map(|t| t * t).sum::<f64>() / draws as f64;
    (mean, second)
}

pub fn main() {
    let dim = 9;
    let draws = 400;

    let haar = SamplerSpec::new(SamplerKind::Haar, dim, 0);
    let g = haar.draw(&mut RngStream::from_seed(1));
    println!(
        "one Haar draw in SO({dim}): det {:+}, orthogonality defect {:.1e}",
        g.det_sign(),
        g.matrix().orthogonality_defect()
    );
    let (m1, m2) = trace_moments(&haar, draws, 2);
    println!("haar            : E Tr = {m1:+.3}, E Tr^2 = {m2:.3}");

    for kind in [SamplerKind::Kac, SamplerKind::Reflections] {
        for steps in [5, 20, 80] {
            let spec = SamplerSpec::new(kind, dim, steps);
            let (m1, m2) = trace_moments(&spec, draws, 3);
            println!("{:<16}: E Tr = {m1:+.3}, E Tr^2 = {m2:.3}", format!("{kind:?}({steps})"));
        }
    }

    // a count k runs ⌈k/2⌉ factors before the DFT and ⌊k/2⌋ after it
    for steps in [Steps::Count(1), Steps::Jor { m1: 1, m2: 1 }, Steps::Count(4)] {
        let spec = SamplerSpec::new(SamplerKind::Jor, dim, steps);
        let (m1, m2) = trace_moments(&spec, draws, 4);
        println!("{:<16}: E Tr = {m1:+.3}, E Tr^2 = {m2:.3}", format!("Jor({})", steps.label()));
    }
}
