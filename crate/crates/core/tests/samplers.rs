use orthogof::linalg::{cos_spectrum, Matrix};
use orthogof::rng::RngStream;
use orthogof::samplers::{
    haar_orthogonal, jor_transform, kac_walk, random_unit_vector, reflection_product,
    reflection_walk, JorOperator, SamplerKind, SamplerSpec,
};
use orthogof::statistics::spectrum_sufficient;
use proptest::prelude::*;

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}

#[test]
fn haar_in_dimension_one() {
    let g = haar_orthogonal(1, &mut RngStream::from_seed(0));
    assert_eq!(g.matrix().as_slice(), &[1.0]);
    assert_eq!(g.det_sign(), 1);
}

#[test]
fn haar_trace_is_approximately_standard_normal() {
    let root = RngStream::from_seed(2024);
    let traces: Vec<f64> = (0..10_000)
        .map(|i| haar_orthogonal(51, &mut root.split(i)).trace())
        .collect();
    let (m, v) = mean_var(&traces);
    assert!(m.abs() < 0.05, "mean {m}");
    assert!((v - 1.0).abs() < 0.1, "variance {v}");
}

#[test]
fn haar_log_vandermonde_mean() {
    let root = RngStream::from_seed(77);
    let t1: Vec<f64> = (0..1000)
        .map(|i| {
            let g = haar_orthogonal(51, &mut root.split(i));
            spectrum_sufficient(&cos_spectrum(&g).unwrap().x)[0]
        })
        .collect();
    let (m, _) = mean_var(&t1);
    assert!((m + 329.70).abs() < 1.0, "mean {m}");
}

#[test]
fn kac_walk_basics() {
    let mut rng = RngStream::from_seed(1);
    assert_eq!(kac_walk(7, 0, &mut rng).matrix().as_slice(), Matrix::identity(7).as_slice());
    for k in [1, 10, 500] {
        let g = kac_walk(9, k, &mut rng);
        assert!(g.matrix().orthogonality_defect() <= 1e-10);
        assert_eq!(g.det_sign(), 1);
    }
}

#[test]
fn reflection_basics() {
    let mut rng = RngStream::from_seed(4);
    let g = reflection_walk(11, 1, &mut rng);
    assert!((g.trace() - 9.0).abs() < 1e-12);
    assert_eq!(g.det_sign(), -1);
    let u = random_unit_vector(11, &mut rng);
    let h = reflection_product(11, &[u.clone(), u]);
    assert!(h.matrix().max_abs_diff(&Matrix::identity(11)) < 1e-14);
    assert_eq!(h.det_sign(), 1);
}

#[test]
fn jor_without_factors() {
    let mut rng = RngStream::from_seed(8);
    let g = jor_transform(2, 0, 0, &mut rng);
    assert!(g.matrix().max_abs_diff(&Matrix::identity(2)) < 1e-15);

    let op = JorOperator::sample(3, 0, 0, &mut rng);
    let mut e3 = vec![0.0, 0.0, 1.0];
    op.apply(&mut e3);
    assert_eq!(e3, vec![0.0, 0.0, 1.0]);
}

#[test]
fn jor_is_orthogonal_at_full_size() {
    let mut rng = RngStream::from_seed(12);
    let op = JorOperator::sample(51, 6, 6, &mut rng);
    let m = op.to_matrix();
    assert!(m.orthogonality_defect() <= 1e-10);
    let g = op.to_group_element();
    let via_lu = orthogof::linalg::validate_group_element(m, 1e-10).unwrap();
    assert_eq!(g.det_sign(), via_lu.det_sign());
}

#[test]
fn jor_fast_path_matches_matrix() {
    let mut rng = RngStream::from_seed(13);
    let op = JorOperator::sample(10, 2, 3, &mut rng);
    let m = op.to_matrix();
    let v: Vec<f64> = (0..10).map(|i| (i as f64).cos()).collect();
    let mut w = v.clone();
    op.apply(&mut w);
    let mv = m.mat_vec(&v);
    for (a, b) in w.iter().zip(&mv) {
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn sampler_specs_are_deterministic() {
    for kind in [SamplerKind::Haar, SamplerKind::Kac, SamplerKind::Reflections, SamplerKind::Jor] {
        let spec = SamplerSpec::new(kind, 7, 4).with_seed(99);
        let a = spec.sample(5).unwrap();
        let b = spec.sample(5).unwrap();
        for (g, h) in a.iter().zip(&b) {
            assert_eq!(g.matrix().as_slice(), h.matrix().as_slice());
        }
        if kind == SamplerKind::Jor {
            assert!(a.iter().all(|g| g.det_sign() == 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn walks_stay_orthogonal(seed in any::<u64>(), n in 2usize..16, k in 0usize..200) {
        let mut rng = RngStream::from_seed(seed);
        let kac = kac_walk(n, k, &mut rng);
        prop_assert!(kac.matrix().orthogonality_defect() <= 1e-10);
        let refl = reflection_walk(n, k, &mut rng);
        prop_assert!(refl.matrix().orthogonality_defect() <= 1e-10);
        prop_assert_eq!(refl.det_sign(), if k % 2 == 0 { 1 } else { -1 });
    }

    #[test]
    fn jor_fixes_last_coordinate_of_f_block(seed in any::<u64>(), d in 1usize..20) {
        let n = 2 * d + 1;
        let op = JorOperator::sample(n, 0, 0, &mut RngStream::from_seed(seed));
        let mut v: Vec<f64> = (0..n).map(|i| (i as f64 + seed as f64).sin()).collect();
        let last = v[n - 1];
        op.apply(&mut v);
        prop_assert_eq!(v[n - 1], last);
    }

    #[test]
    fn jor_orthogonal_for_any_factor_counts(seed in any::<u64>(), n in 2usize..40, m1 in 0usize..5, m2 in 0usize..5) {
        let g = jor_transform(n, m1, m2, &mut RngStream::from_seed(seed));
        prop_assert!(g.matrix().orthogonality_defect() <= 1e-10);
    }
}
