mod common;

use common::*;
use proptest::prelude::*;
use wml_core::tensor::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_matches_index_formula_and_is_associative(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let mut r = rng(seed);
        let (a, b, c3) = (gaussian(&mut r, da, da), gaussian(&mut r, db, db), gaussian(&mut r, 2, 2));
        prop_assert_eq!(kron(&a, &b).unwrap(), naive_kron(&a, &b));
        let left = kron(&kron(&a, &b).unwrap(), &c3).unwrap();
        let right = kron(&a, &kron(&b, &c3).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace_and_is_linear(seed in any::<u64>(), dims in prop::collection::vec(2usize..4, 1..4), keep_mask in any::<u8>()) {
        let mut r = rng(seed);
        let sd = SystemDims::new(dims.clone()).unwrap();
        let n = sd.total();
        let (x, y) = (gaussian(&mut r, n, n), gaussian(&mut r, n, n));
        let keep: Vec<usize> = (0..dims.len()).filter(|k| keep_mask >> k & 1 == 1).collect();
        let px = partial_trace(&x, &sd, &keep).unwrap();
        prop_assert!((px.trace() - x.trace()).norm() <= 1e-12);
        let sum = partial_trace(&(&x + &y), &sd, &keep).unwrap();
        let py = partial_trace(&y, &sd, &keep).unwrap();
        prop_assert!(sum.max_abs_diff(&(&px + &py)) <= 1e-12);
    }

    #[test]
    fn swap_exchanges_factors(seed in any::<u64>(), d in 2usize..4) {
        let mut r = rng(seed);
        let (a, b) = (gaussian(&mut r, d, d), gaussian(&mut r, d, d));
        let s = swap_operator::<f64>(d);
        let lhs = s.dot(&kron(&a, &b).unwrap()).dot(&s);
        prop_assert!(lhs.max_abs_diff(&kron(&b, &a).unwrap()) <= 1e-12);
    }

    #[test]
    fn cycswap_unitary_of_order_m(d in 2usize..4, m in 2usize..5) {
        prop_assume!(d.pow(m as u32) <= 81);
        let u = cycswap_operator::<f64>(d, m).unwrap();
        let n = u.rows();
        prop_assert!(u.adjoint().dot(&u).max_abs_diff(&Matrix::identity(n)) <= 1e-12);
        for i in 0..n {
            let mut v = ket(n, i);
            for _ in 0..m {
                v = u.apply(&v);
            }
            prop_assert_eq!(v, ket(n, i));
        }
    }

    #[test]
    fn exp_group_property(seed in any::<u64>(), s in 0.01f64..1.0, t in 0.01f64..1.0, n in 2usize..6) {
        let mut r = rng(seed);
        let g = gaussian(&mut r, n, n);
        let a = g.scale_real(1.0 / g.norm1());
        let tol = 1e-12;
        let both = mat_exp(&a.scale_real(s + t), tol).unwrap();
        let split = mat_exp(&a.scale_real(s), tol).unwrap().dot(&mat_exp(&a.scale_real(t), tol).unwrap());
        prop_assert!(both.max_abs_diff(&split) <= tol * 10.0);
    }

    #[test]
    fn permutations_compose(seed in any::<u64>(), p1 in Just(vec![0usize, 1, 2]).prop_shuffle(), p2 in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let mut r = rng(seed);
        let dims = SystemDims::new(vec![2, 3, 2]).unwrap();
        let m = gaussian(&mut r, 12, 12);
        let once = permute_subsystems(&m, &dims, &p1).unwrap();
        let mid = permuted_dims(&dims, &p1).unwrap();
        let twice = permute_subsystems(&once, &mid, &p2).unwrap();
        let composed: Vec<usize> = p2.iter().map(|&i| p1[i]).collect();
        prop_assert_eq!(twice, permute_subsystems(&m, &dims, &composed).unwrap());
        let inverse: Vec<usize> = (0..3).map(|i| p1.iter().position(|&x| x == i).unwrap()).collect();
        prop_assert_eq!(permute_subsystems(&once, &mid, &inverse).unwrap(), m);
    }

    #[test]
    fn hs_cauchy_schwarz(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (gaussian(&mut r, 3, 3), gaussian(&mut r, 3, 3));
        prop_assert!(hs_inner(&a, &b).unwrap().norm() <= a.frobenius() * b.frobenius() * (1.0 + 1e-12));
        prop_assert!((hs_inner(&a, &a).unwrap().re - a.frobenius().powi(2)).abs() <= 1e-12 * a.frobenius().powi(2));
    }

    #[test]
    fn trace_norm_agrees_with_eigen_sum(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let g = gaussian(&mut r, n, n);
        let h = g.hermitian_part();
        let eig = hermitian_eigenvalues(&h).unwrap();
        // Trace and Frobenius norm are spectral invariants.
        prop_assert!((eig.iter().sum::<f64>() - h.trace().re).abs() <= 1e-10);
        prop_assert!((eig.iter().map(|x| x * x).sum::<f64>().sqrt() - h.frobenius()).abs() <= 1e-10);
        // ‖A‖₁ ≥ |Tr[A]| and ‖A‖₂ ≤ ‖A‖₁ ≤ √n ‖A‖₂.
        let t1 = trace_norm(&g).unwrap();
        prop_assert!(t1 + 1e-10 >= g.trace().norm());
        prop_assert!(t1 + 1e-10 >= g.frobenius() && t1 <= (n as f64).sqrt() * g.frobenius() + 1e-10);
        // Unitary invariance: ‖A‖₁ = ‖A U‖₁ for a permutation U.
        let u = cycswap_operator::<f64>(2, 2).unwrap();
        if n == 4 {
            prop_assert!((trace_norm(&g.dot(&u)).unwrap() - t1).abs() <= 1e-10);
        }
    }
}
