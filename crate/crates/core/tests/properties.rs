mod common;

use arlimit::limit::{cluster_roots, default_contour_points, limit_a_confluent};
use arlimit::oracles::bs_truncation_for;
use arlimit::roots::SolveOptions;
use arlimit::{
    bs_truncated, contour_coefficient, limit_a, residue_coefficients, slope_estimate, solve_roots,
    Complex64, Method, MonicPolynomial, RootMultiset, ShiftVector, DEFAULT_CLUSTER_TOL,
};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn multiset_strategy(max_k: usize, max_modulus: f64) -> impl Strategy<Value = RootMultiset> {
    (1..=max_k, any::<u64>()).prop_map(move |(k, seed)| {
        let mut r = rng(seed);
        random_multiset(&mut r, k, max_modulus)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn limit_is_permutation_symmetric(roots in multiset_strategy(5, 0.9), s in 0u64..8, rot in 0usize..5) {
        let a = limit_a(&roots, s).unwrap().value;
        let mut perm = roots.roots().to_vec();
        let n = perm.len();
        perm.rotate_left(rot % n);
        perm.swap(0, n - 1);
        let b = limit_a(&RootMultiset::new(perm).unwrap(), s).unwrap().value;
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn k1_law(lambda in -0.999f64..0.999, s in 0u64..=12) {
        let roots = RootMultiset::from_real(&[lambda]).unwrap();
        let a = limit_a(&roots, s).unwrap().value;
        let expect = lambda.powi(s as i32);
        prop_assert!((a.re - expect).abs() <= 4.0 * f64::EPSILON * expect.abs());
        prop_assert_eq!(a.im, 0.0);
    }

    #[test]
    fn conjugate_closed_input_is_certified_real(roots in multiset_strategy(6, 0.95), s in 0u64..=12) {
        let out = limit_a(&roots, s).unwrap();
        prop_assert!(out.real_value.is_some());
        prop_assert!(out.value.im.abs() <= 1e-10 * (1.0 + out.value.norm()));
    }

    #[test]
    fn residues_sum_to_s0_limit(roots in multiset_strategy(5, 0.9)) {
        let res = residue_coefficients(&roots).unwrap();
        let a0 = limit_a(&roots, 0).unwrap().value;
        prop_assert!((res.sum() - a0).norm() <= 1e-12 * a0.norm().max(1e-300));
    }

    #[test]
    fn contour_reproduces_residue_formula(roots in multiset_strategy(5, 0.9), s in 0u64..8) {
        let a = limit_a(&roots, s).unwrap().value;
        let c = contour_coefficient(&roots, s, default_contour_points(&roots, s)).unwrap().value;
        prop_assert!((a - c).norm() <= 1e-10 * (1.0 + a.norm()));
    }

    #[test]
    fn confluence_is_continuous(roots in multiset_strategy(4, 0.85), eps in 1e-9f64..1e-6, s in 0u64..6) {
        // Split the first root into a near-double root.
        let mut z = roots.roots().to_vec();
        let first = z[0];
        z.push(first + Complex64::new(eps, 0.0));
        if first.im != 0.0 {
            // Keep the multiset conjugate-closed.
            let idx = z.iter().position(|w| (w - first.conj()).norm() == 0.0).unwrap();
            let partner = z[idx];
            z.push(partner + Complex64::new(eps, 0.0));
        }
        let split = RootMultiset::new(z.clone()).unwrap();
        let exact: Vec<Complex64> = z.iter().map(|w| {
            if (w - first).norm() <= eps * 1.5 { first }
            else if (w - first.conj()).norm() <= eps * 1.5 { first.conj() }
            else { *w }
        }).collect();
        let merged = RootMultiset::new(exact).unwrap();
        let a_split = limit_a_confluent(&split, s, DEFAULT_CLUSTER_TOL).unwrap().value;
        let a_merged = limit_a(&merged, s).unwrap();
        prop_assert_eq!(a_merged.method, Method::Confluent);
        prop_assert!((a_split - a_merged.value).norm() <= 1e-4 * (1.0 + a_merged.value.norm()));
        // Above the cluster threshold the residue route agrees as well.
        if eps > 1e-7 {
            let direct = limit_a(&split, s).unwrap();
            prop_assert_eq!(direct.method, Method::DistinctResidues);
            prop_assert!((direct.value - a_split).norm() <= 1e-4 * (1.0 + a_split.norm()));
        }
    }

    #[test]
    fn truncated_b_agrees(roots in multiset_strategy(4, 0.8), s in 0u64..5) {
        let a = limit_a(&roots, s).unwrap().value;
        let m = bs_truncation_for(&roots, s, 1e-12).unwrap();
        let bs = bs_truncated(&roots, s, m).unwrap();
        prop_assert!(bs.tail_bound.unwrap() <= 1e-12);
        prop_assert!((a - bs.value).norm() <= 1e-10 * (1.0 + a.norm()));
    }

    #[test]
    fn solver_round_trip(roots in multiset_strategy(6, 0.9)) {
        let poly = MonicPolynomial::from_roots(&roots).unwrap();
        let sol = solve_roots(&poly, SolveOptions::default()).unwrap();
        prop_assert!(sol.roots.conjugate_closed());
        let errs = match_roots(sol.roots.roots(), roots.roots());
        // Random draws can land close together; conditioning then limits accuracy.
        let sep = roots.roots().iter().enumerate()
            .flat_map(|(i, a)| roots.roots()[i + 1..].iter().map(move |b| (a - b).norm()))
            .fold(f64::INFINITY, f64::min);
        if sep > 1e-3 {
            prop_assert!(errs.iter().all(|&e| e <= 1e-8), "errors {:?}", errs);
        }
        let sorted = sol.roots.roots().windows(2).all(|w| (w[0].re, w[0].im) <= (w[1].re, w[1].im));
        prop_assert!(sorted);
    }
}

#[test]
fn slope_agrees_with_closed_form() {
    let mut r = rng(11);
    for _ in 0..6 {
        let k = r.gen_range(1..=3);
        let roots = random_multiset(&mut r, k, 0.9);
        let s = r.gen_range(0..=3);
        let shifts = shifts_with_sum(&mut r, k, s);
        let a = limit_a(&roots, shifts.s()).unwrap().value;
        let est = slope_estimate(&roots, &shifts, 150, 200).unwrap();
        assert!(close(est.value, a, 1e-6), "{} vs {}", est.value, a);
    }
}

#[test]
fn slope_never_exceeds_b() {
    // The terms of the lattice sum are a subset of those of B_S, so for
    // non-negative roots the slope cannot exceed B_S.
    let mut r = rng(12);
    for _ in 0..8 {
        let k = r.gen_range(1..=3);
        let roots: Vec<f64> = (0..k).map(|_| r.gen_range(0.0..0.8)).collect();
        let roots = RootMultiset::from_real(&roots).unwrap();
        let s = r.gen_range(0..=3);
        let shifts = shifts_with_sum(&mut r, k, s);
        let est = slope_estimate(&roots, &shifts, 150, 200).unwrap();
        let bs = bs_truncated(&roots, shifts.s(), 200).unwrap();
        assert!(est.value.re <= bs.value.re + bs.tail_bound.unwrap() + 1e-9);
    }
}

#[test]
fn slope_depends_only_on_total_shift() {
    let roots = RootMultiset::new(vec![
        Complex64::new(0.4, 0.5),
        Complex64::new(0.4, -0.5),
        Complex64::new(-0.7, 0.0),
    ])
    .unwrap();
    let vectors = [vec![2, 0, 0], vec![-1, 1, 2], vec![0, 0, -2], vec![3, -3, 2]];
    let values: Vec<Complex64> = vectors
        .iter()
        .map(|v| {
            slope_estimate(&roots, &ShiftVector::new(v.clone()).unwrap(), 150, 200)
                .unwrap()
                .value
        })
        .collect();
    for v in &values {
        assert!(close(*v, values[0], 1e-9));
    }
    let a = limit_a(&roots, 2).unwrap().value;
    assert!(close(values[0], a, 1e-6));
}

#[test]
fn clusters_report_multiplicities() {
    let roots = RootMultiset::from_real(&[0.5, -0.2, 0.5, 0.5, -0.2]).unwrap();
    let out = limit_a(&roots, 1).unwrap();
    assert_eq!(out.method, Method::Confluent);
    let clusters = out.clusters.unwrap();
    let mult: Vec<usize> = clusters.iter().map(|c| c.multiplicity()).collect();
    assert_eq!(mult, vec![3, 2]);
    assert_eq!(cluster_roots(&roots, DEFAULT_CLUSTER_TOL), clusters);
    let bs = bs_truncated(&roots, 1, 300).unwrap();
    assert!(close(out.value, bs.value, 1e-10));
}
