//! Randomized invariants. Operators are drawn from seeded streams so failures
//! shrink to a reproducible seed.

use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use rand::Rng;
use schmidt_norms::norms::{
    sk_exact_small, sk_norm_bounds, sk_norm_profile, sk_upper_bound, SeesawOptions,
};
use schmidt_norms::qops::{
    adjoint_pairing_defect, identity_map, partial_transpose, realify, reduction_map, reduction_map_k,
    swap_operator, trace_map, transpose_map, CMatrix,
};
use schmidt_norms::rng::{random_hermitian, random_projection, random_psd, random_unit_vector, seeded};
use schmidt_norms::schmidt::{pure_norm_sk, schmidt_decompose, PureState};
use schmidt_norms::sdp::{build_cone_sdp, solve_general, to_standard_form, SolveStatus, SolverOptions};
use schmidt_norms::states::{
    bures_sample, check_r_undistillable, p_value, undistill_threshold,
};
use schmidt_norms::{BipartiteDims, HermitianOperator, MapRep};

fn shape() -> impl Strategy<Value = BipartiteDims> {
    prop_oneof![Just((2, 2)), Just((3, 2)), Just((2, 3)), Just((3, 3))]
        .prop_map(|(n, m)| BipartiteDims::new(n, m).unwrap())
}

fn small_shape() -> impl Strategy<Value = BipartiteDims> {
    prop_oneof![Just((2, 2)), Just((3, 2))].prop_map(|(n, m)| BipartiteDims::new(n, m).unwrap())
}

fn maps_for(m: usize) -> Vec<MapRep> {
    vec![identity_map(m), transpose_map(m), reduction_map(m), reduction_map_k(m, 2), trace_map(m)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_is_a_trace_preserving_involution(d in shape(), seed in any::<u64>()) {
        let mut g = seeded(seed);
        let x = random_hermitian(d.total(), &mut g);
        let y = random_hermitian(d.total(), &mut g);
        let xt = partial_transpose(&x, d).unwrap();
        prop_assert!((partial_transpose(&xt, d).unwrap().matrix() - x.matrix()).norm() < 1e-12);
        prop_assert!((xt.trace() - x.trace()).abs() < 1e-12);
        prop_assert!((xt.matrix() - xt.matrix().adjoint()).norm() < 1e-12);
        let sum = partial_transpose(&x.add(&y.scaled(2.5)).unwrap(), d).unwrap();
        let lin = xt.add(&partial_transpose(&y, d).unwrap().scaled(2.5)).unwrap();
        prop_assert!((sum.matrix() - lin.matrix()).norm() < 1e-12);
    }

    #[test]
    fn map_adjoints_pair_correctly(m in 2usize..5, seed in any::<u64>()) {
        let mut g = seeded(seed);
        for phi in maps_for(m) {
            let x = random_hermitian(phi.in_dim(), &mut g);
            let y = random_hermitian(phi.out_dim(), &mut g);
            let scale = x.frobenius_norm() * y.frobenius_norm();
            prop_assert!(adjoint_pairing_defect(&phi, x.matrix(), y.matrix()) <= 1e-9 * scale, "{}", phi.label());
        }
    }

    #[test]
    fn realify_doubles_the_spectrum(dim in 2usize..7, seed in any::<u64>()) {
        let mut g = seeded(seed);
        let h = random_hermitian(dim, &mut g);
        let mut expected: Vec<f64> = h.eigenvalues().into_iter().flat_map(|v| [v, v]).collect();
        expected.sort_by(f64::total_cmp);
        let mut got: Vec<f64> = SymmetricEigen::new(realify(&h)).eigenvalues.iter().copied().collect();
        got.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&expected) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        let p = random_psd(dim, &mut g);
        prop_assert!(SymmetricEigen::new(realify(&p)).eigenvalues.min() > -1e-9);
    }

    #[test]
    fn schmidt_round_trip_and_pure_norms(d in shape(), seed in any::<u64>()) {
        let mut g = seeded(seed);
        let v = PureState::new(random_unit_vector(d.total(), &mut g), d).unwrap();
        let dec = schmidt_decompose(&v).unwrap();
        prop_assert!((dec.reconstruct() - v.amplitudes()).norm() < 1e-9);
        let norms: Vec<f64> = (1..=d.max_schmidt_rank()).map(|k| pure_norm_sk(&v, k).unwrap()).collect();
        prop_assert!(norms.windows(2).all(|w| w[0] <= w[1] + 1e-15));
        prop_assert!((norms.last().unwrap() - 1.0).abs() < 1e-10);
        prop_assert!(norms[0] >= 1.0 / d.max_schmidt_rank() as f64 - 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn duality_and_map_monotonicity(d in shape(), seed in any::<u64>()) {
        let mut g = seeded(seed);
        let x = random_psd(d.total(), &mut g);
        let opts = SolverOptions::default();
        let mut previous = f64::INFINITY;
        for maps in [vec![reduction_map(d.m)], vec![reduction_map(d.m), transpose_map(d.m)]] {
            let p = build_cone_sdp(&x, &maps, d).unwrap();
            let r = solve_general(&p, &opts).unwrap().result;
            prop_assert!(r.dual_obj >= r.primal_obj - 1e-7);
            prop_assert_eq!(r.status, SolveStatus::Optimal);
            prop_assert!((r.dual_obj - r.primal_obj).abs() / r.dual_obj.abs().max(1.0) <= 1e-7);
            prop_assert!(r.dual_obj <= previous + 1e-7);
            previous = r.dual_obj;
        }
    }

    #[test]
    fn general_feasibility_carries_to_standard_form(d in small_shape(), seed in any::<u64>()) {
        let mut g = seeded(seed);
        let x = random_psd(d.total(), &mut g);
        let p = build_cone_sdp(&x, &[transpose_map(d.m), reduction_map(d.m)], d).unwrap();
        // A small perturbation of the maximally mixed state stays inside every constraint.
        let h = random_hermitian(d.total(), &mut g);
        let rho = HermitianOperator::identity(d.total())
            .scaled(0.9 / d.total() as f64)
            .add(&h.scaled(0.01 / (d.total() as f64 * h.operator_norm())))
            .unwrap();
        prop_assert!(p.primal_violation(&rho) <= 0.0);
        let sf = to_standard_form(&p).unwrap();
        let coords = sf.param.coordinates(&rho);
        let lhs = sf.problem.apply_f(&coords);
        for (db, fb) in sf.problem.d().iter().zip(&lhs) {
            prop_assert!(SymmetricEigen::new(db - fb).eigenvalues.min() >= -1e-12);
        }
        prop_assert!((sf.problem.primal_objective(&coords) - p.primal_objective(&rho)).abs() <= 1e-9);
    }

    #[test]
    fn bounds_sandwich_and_exact_regime(d in shape(), seed in any::<u64>()) {
        let mut g = seeded(seed);
        let x = random_psd(d.total(), &mut g);
        for k in 1..=d.max_schmidt_rank() {
            let b = sk_norm_bounds(&x, k, d, &SeesawOptions::default()).unwrap();
            prop_assert!(b.lower <= b.upper + 1e-6);
            let w = b.lower_witness.clone().unwrap();
            prop_assert!((x.expectation(w.amplitudes()) - b.lower).abs() <= 1e-8);
            prop_assert!(schmidt_norms::schmidt::schmidt_rank(&w, 1e-8) <= k);
            if k == 1 && d.m == 2 && d.n <= 3 {
                prop_assert!(b.gap() <= 1e-5, "gap {} for {}", b.gap(), d);
            }
        }
    }

    #[test]
    fn profile_is_monotone_and_ends_at_the_top_eigenvalue(d in shape(), seed in any::<u64>()) {
        let mut g = seeded(seed);
        let x = random_psd(d.total(), &mut g);
        let profile = sk_norm_profile(&x, d, &SeesawOptions::default()).unwrap();
        for w in profile.windows(2) {
            prop_assert!(w[0].upper <= w[1].upper + 1e-6 && w[0].lower <= w[1].lower + 1e-6);
        }
        let last = profile.last().unwrap();
        prop_assert!((last.upper - x.max_eigenvalue()).abs() <= 1e-6);
        prop_assert!((last.lower - x.max_eigenvalue()).abs() <= 1e-6);
    }

    #[test]
    fn bounds_are_homogeneous(d in shape(), seed in any::<u64>(), c in 0.1f64..10.0) {
        let mut g = seeded(seed);
        let x = random_psd(d.total(), &mut g);
        let seesaw = SeesawOptions::default();
        let a = sk_norm_bounds(&x, 1, d, &seesaw).unwrap();
        let b = sk_norm_bounds(&x.scaled(c), 1, d, &seesaw).unwrap();
        prop_assert!((b.upper - c * a.upper).abs() <= 1e-8 * c.max(1.0), "upper {} vs {}", b.upper, c * a.upper);
        prop_assert!((b.lower - c * a.lower).abs() <= 1e-8 * c.max(1.0), "lower {} vs {}", b.lower, c * a.lower);
    }

    #[test]
    fn projection_floor(n in 2usize..4, seed in any::<u64>()) {
        let d = BipartiteDims::new(n, n).unwrap();
        let mut g = seeded(seed);
        for k in 1..n {
            let rank = g.random_range(k * n..=n * n);
            let p = random_projection(n * n, rank, &mut g);
            let upper = sk_upper_bound(&p, &schmidt_norms::norms::default_maps(k, n), d).unwrap().value;
            prop_assert!(upper >= k as f64 / n as f64 - 1e-6, "rank {rank}, k {k}: {upper}");
        }
    }

    #[test]
    fn bures_two_qubit_bracket(seed in any::<u64>()) {
        let rho = bures_sample(4, seed).unwrap();
        let l = rho.eigenvalues();
        let s1 = sk_exact_small(&rho, BipartiteDims::new(2, 2).unwrap()).unwrap();
        prop_assert!(l[2] - 1e-7 <= s1 && s1 <= l[3] + 1e-7);
    }
}

proptest! {
    #[test]
    fn undistillability_is_monotone_in_alpha(n in 2usize..12, r in 1usize..5, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if check_r_undistillable(n, r, hi).unwrap().certified {
            prop_assert!(check_r_undistillable(n, r, lo).unwrap().certified);
        }
    }

    #[test]
    fn threshold_is_at_least_two_over_n(n in 3usize..40, r in 1usize..6) {
        if p_value(n, r) >= 1.0 {
            prop_assert!(undistill_threshold(n, r).unwrap() >= 2.0 / n as f64 - 1e-12);
        }
    }

    #[test]
    fn swap_squares_to_identity(n in 2usize..5) {
        let s = swap_operator(n);
        let sq: CMatrix = s.matrix() * s.matrix();
        prop_assert!((sq - CMatrix::identity(n * n, n * n)).norm() < 1e-14);
        prop_assert!((s.operator_norm() - 1.0).abs() < 1e-12);
    }
}
