mod common;

use common::*;
use proptest::prelude::*;
use wml_core::channels::LindbladSpec;
use wml_core::program::*;
use wml_core::tensor::{gamma_vector, hs_inner, kron, vec_inner};
use wml_core::WmlError;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn mixed_spec() -> LindbladSpec<f64> {
    let sigma = M::unit(2, 0, 0);
    let l1 = M::unit(2, 0, 1);
    let l2 = pauli_z().scale_real(0.5 * SQRT_HALF);
    LindbladSpec::new(2, vec![(-0.7, sigma)], vec![l1, l2]).unwrap()
}

// (L ⊗ I)|Γ⟩/‖L‖₂ built from the Kronecker product and the Γ vector.
fn encode_oracle(l: &M) -> Vec<num_complex::Complex64> {
    let d = l.rows();
    let big = kron(&l.scale_real(1.0 / l.frobenius()), &M::identity(d)).unwrap();
    big.apply(&gamma_vector(d))
}

#[test]
fn encode_examples() {
    let phi = encode_operator(&M::identity(2).scale_real(SQRT_HALF)).unwrap();
    let expected = [SQRT_HALF, 0.0, 0.0, SQRT_HALF];
    for (z, e) in phi.amplitudes().iter().zip(expected) {
        assert!((z - c(e, 0.0)).norm() < 1e-15);
    }
    let canonical = ProgramState::<f64>::maximally_entangled(2);
    for (x, y) in canonical.amplitudes().iter().zip(phi.amplitudes()) {
        assert!((x - y).norm() < 1e-15);
    }

    let sx = encode_operator(&pauli_x().scale_real(SQRT_HALF)).unwrap();
    let expected = [0.0, SQRT_HALF, SQRT_HALF, 0.0];
    for (z, e) in sx.amplitudes().iter().zip(expected) {
        assert!((z - c(e, 0.0)).norm() < 1e-15);
    }

    let mut r = rng(10);
    let l = gaussian(&mut r, 3, 3);
    let a = encode_operator(&l).unwrap();
    let b = encode_operator(&l.scale_real(2.0)).unwrap();
    for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
        assert!((x - y).norm() < 1e-15);
    }
    for (x, y) in a.amplitudes().iter().zip(encode_oracle(&l)) {
        assert!((x - y).norm() < 1e-12);
    }
    assert!(matches!(
        encode_operator(&M::zeros(2, 2)),
        Err(WmlError::Argument(_))
    ));
}

#[test]
fn decode_examples() {
    let phi = ProgramState::maximally_entangled(2);
    assert!(decode_operator(&phi).max_abs_diff(&M::identity(2).scale_real(SQRT_HALF)) < 1e-15);

    let mut r = rng(11);
    let l = unit_operator(&mut r, 3);
    assert!(decode_operator(&encode_operator(&l).unwrap()).max_abs_diff(&l) < 1e-12);

    let v = vec![
        c(0.0, 0.0),
        c(SQRT_HALF, 0.0),
        c(SQRT_HALF, 0.0),
        c(0.0, 0.0),
    ];
    let psi = ProgramState::from_vec(2, v).unwrap();
    assert!(decode_operator(&psi).max_abs_diff(&pauli_x().scale_real(SQRT_HALF)) < 1e-15);
    assert!(ProgramState::from_vec(2, ket(3, 0)).is_err());
}

#[test]
fn omega_examples() {
    let single = LindbladSpec::from_jumps(2, vec![M::unit(2, 0, 1)]).unwrap();
    let mut r = rng(12);
    for _ in 0..100 {
        assert_eq!(sample_omega(&single, &mut r).unwrap(), OmegaSample::Jump(0));
    }

    let spec = mixed_spec();
    assert!((spec.normalization() - 1.95).abs() < 1e-12);
    let sampler = OmegaSampler::new(&spec).unwrap();
    let probs: Vec<_> = sampler.distribution().collect();
    assert_eq!(probs[0].0, OmegaSample::Negative(0));
    assert!((probs[0].1 - 0.7 / 1.95).abs() < 1e-12);

    let empty = LindbladSpec::<f64>::new(2, vec![], vec![]).unwrap();
    assert!(matches!(
        sample_omega(&empty, &mut r),
        Err(WmlError::Spec(_))
    ));

    let a: Vec<_> = (0..50).map(|_| sampler.sample(&mut rng(99))).collect();
    let b: Vec<_> = (0..50).map(|_| sampler.sample(&mut rng(99))).collect();
    assert_eq!(a, b);
}

#[test]
fn omega_frequencies_pass_chi_square() {
    let spec = mixed_spec();
    let sampler = OmegaSampler::new(&spec).unwrap();
    let expected: Vec<(OmegaSample, f64)> = vec![
        (OmegaSample::Negative(0), 0.7 / 1.95),
        (OmegaSample::Jump(0), 1.0 / 1.95),
        (OmegaSample::Jump(1), 0.25 / 1.95),
    ];
    let draws = 100_000usize;
    let mut r = rng(13);
    let mut counts = [0usize; 3];
    for _ in 0..draws {
        let s = sampler.sample(&mut r);
        counts[expected.iter().position(|(o, _)| *o == s).unwrap()] += 1;
    }
    let mut chi2 = 0.0;
    for (count, (_, p)) in counts.iter().zip(&expected) {
        let mean = draws as f64 * p;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        assert!((*count as f64 - mean).abs() <= 3.0 * sd);
        chi2 += (*count as f64 - mean).powi(2) / mean;
    }
    // χ² with 2 degrees of freedom at significance 1e-3: −2 ln(1e-3).
    assert!(chi2 < -2.0 * 1e-3f64.ln(), "chi2 = {chi2}");
}

// Independent η: bisection on the directly evaluated distance.
fn bisect_distance(l: &M, l_tilde: &M, delta: f64) -> f64 {
    let g = {
        let diff = l_tilde - l;
        let along = hs_inner(l, &diff).unwrap();
        let g = &diff - &l.scale(along);
        g.scale_real(1.0 / g.frobenius())
    };
    let dist = |eta: f64| {
        let x = (l + &g.scale_real(eta)).scale_real(1.0 / (1.0 + eta * eta).sqrt());
        (&x - l).frobenius()
    };
    let (mut lo, mut hi) = (0.0, 1e6);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dist(mid) < delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    dist(0.5 * (lo + hi))
}

#[test]
fn perturb_examples() {
    let mut r = rng(14);
    let l = unit_operator(&mut r, 2);
    let tiny = perturb_unit_operator(&l, 1e-6, &mut r).unwrap();
    assert!((&tiny - &l).frobenius() <= 1e-6 * (1.0 + 1e-6));

    let lt = perturb_unit_operator(&l, 0.3, &mut r).unwrap();
    let achieved = (&lt - &l).frobenius();
    assert!((achieved - 0.3).abs() <= 0.3 * 1e-6);
    assert!((bisect_distance(&l, &lt, 0.3) - achieved).abs() < 1e-9);
    assert!((lt.frobenius() - 1.0).abs() < 1e-12);

    let far = perturb_unit_operator(&l, std::f64::consts::SQRT_2, &mut r).unwrap();
    assert!(((&far - &l).frobenius() - std::f64::consts::SQRT_2).abs() < 1e-9);

    assert!(perturb_unit_operator(&l, 0.0, &mut r).is_err());
    assert!(perturb_unit_operator(&l, 1.5, &mut r).is_err());
    assert!(perturb_unit_operator(&l.scale_real(2.0), 0.1, &mut r).is_err());
}

#[test]
fn psi_distance_examples() {
    let l = pauli_x().scale_real(SQRT_HALF);
    let same = psi_distance(&l, &l).unwrap();
    assert!(same.trace_dist.abs() < 1e-7);
    assert!((same.overlap - c(1.0, 0.0)).norm() < 1e-15);

    let theta = std::f64::consts::FRAC_PI_6;
    let lt = (&pauli_x().scale_real(theta.cos()) + &pauli_z().scale_real(theta.sin()))
        .scale_real(SQRT_HALF);
    let r = psi_distance(&l, &lt).unwrap();
    assert!((r.overlap.re - theta.cos()).abs() < 1e-14);
    assert!((r.trace_dist - 0.5).abs() < 1e-12);
    assert!((r.overlap_formula - 0.5).abs() < 1e-12);
    assert!(psi_distance(&l.scale_real(2.0), &lt).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn encoding_is_an_isometry(seed in any::<u64>(), d in 2usize..4) {
        let mut r = rng(seed);
        let (a, b) = (gaussian(&mut r, d, d), gaussian(&mut r, d, d));
        let ip = vec_inner(encode_operator(&a).unwrap().amplitudes(), encode_operator(&b).unwrap().amplitudes());
        let expected = hs_inner(&a, &b).unwrap() / (a.frobenius() * b.frobenius());
        prop_assert!((ip - expected).norm() <= 1e-12);
    }

    #[test]
    fn trace_distance_formula_and_bound(seed in any::<u64>(), d in 2usize..4) {
        let mut r = rng(seed);
        let l = unit_operator(&mut r, d);
        let lt = unit_operator(&mut r, d);
        let p = psi_distance(&l, &lt).unwrap();
        prop_assert!((p.trace_dist - p.overlap_formula).abs() <= 1e-10);
        prop_assert!(p.trace_dist <= p.hs_dist + 1e-12);
    }

    #[test]
    fn perturbation_hits_requested_distance(seed in any::<u64>(), d in 2usize..4, delta in 1e-4f64..1.414) {
        let mut r = rng(seed);
        let l = unit_operator(&mut r, d);
        let lt = perturb_unit_operator(&l, delta, &mut r).unwrap();
        let got = (&lt - &l).frobenius();
        prop_assert!((got - delta).abs() <= delta * 1e-6);
        prop_assert!((lt.frobenius() - 1.0).abs() <= 1e-12);
    }
}
