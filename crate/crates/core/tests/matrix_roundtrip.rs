mod common;

use proptest::prelude::*;

use livsic_core::cocycle::cyclic_product;
use livsic_core::matrix::Mat;
use livsic_core::nonabelian::{
    estimate_distortion, generate_matrix_cocycle, heisenberg_algebra, so2_algebra, solve_matrix_finite, verify_matrix_solution, AdMode,
    MatrixCocycle, MatrixOutcome, SOLUTION_TOL,
};
use livsic_core::oracle::{brute_matrix_solution_check, revalidate_matrix_witness};
use livsic_core::random;
use livsic_core::sft::enumerate_periodic_orbits;
use livsic_core::Limits;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn roundtrip(seed in any::<u64>(), unipotent in any::<bool>()) {
        let limits = Limits::default();
        let mut rng = random::rng(seed);
        let (system, r) = common::finite_instance(&mut rng, 3);
        let group = system.group().as_finite().unwrap().clone();
        let (u, alpha) = if unipotent {
            (random::unipotent_potential(&mut rng, system.sft(), r).unwrap(), random::unipotent_alpha(&group))
        } else {
            (random::so2_potential(&mut rng, system.sft(), r).unwrap(), random::so2_alpha(&mut rng, &group))
        };
        let f = generate_matrix_cocycle(&system, r, &u, &alpha, SOLUTION_TOL, &limits).unwrap();
        let MatrixOutcome::Solved(sol) = solve_matrix_finite(&system, &f, SOLUTION_TOL, &limits).unwrap() else { panic!("not solved") };
        for (a, b) in sol.alpha.iter().zip(&alpha) {
            prop_assert!(a.sub(b).max_abs() <= 1e-9);
        }
        // u' = u g0 for one g0.
        let first = u.keys().next().unwrap();
        let g0 = u[first].inverse(1e-12).unwrap().mul(&sol.u[first]);
        for (w, m) in &u {
            prop_assert!(m.inverse(1e-12).unwrap().mul(&sol.u[w]).sub(&g0).max_abs() <= 1e-9);
        }
        prop_assert!(verify_matrix_solution(&system, &f, &sol, SOLUTION_TOL, &limits).unwrap().certified());
        prop_assert!(brute_matrix_solution_check(&system, &f, &sol, 1e-9, seed));
    }

    #[test]
    fn perturbed_rotation_is_refuted(seed in any::<u64>()) {
        let limits = Limits::default();
        let mut rng = random::rng(seed);
        let (system, r) = common::finite_instance(&mut rng, 3);
        let group = system.group().as_finite().unwrap().clone();
        let u = random::so2_potential(&mut rng, system.sft(), r).unwrap();
        let alpha = random::so2_alpha(&mut rng, &group);
        let f = generate_matrix_cocycle(&system, r, &u, &alpha, SOLUTION_TOL, &limits).unwrap();
        let mut values = f.values().clone();
        let key = values.values().keys().next().unwrap().clone();
        let bumped = Mat::rotation2(0.25).mul(&values.values()[&key]);
        values.set(&key, bumped).unwrap();
        let f = MatrixCocycle::new(values, None, 1e-9).unwrap();
        match solve_matrix_finite(&system, &f, SOLUTION_TOL, &limits).unwrap() {
            MatrixOutcome::Violation(w) => prop_assert!(revalidate_matrix_witness(&system, &f, &w.word(), SOLUTION_TOL)),
            other => panic!("perturbation missed: {other:?}"),
        }
    }

    #[test]
    fn rotated_words_have_equal_trace(seed in any::<u64>()) {
        let limits = Limits::default();
        let mut rng = random::rng(seed);
        let (system, r) = common::finite_instance(&mut rng, 3);
        let u = random::unipotent_potential(&mut rng, system.sft(), r).unwrap();
        let group = system.group().as_finite().unwrap().clone();
        let f = generate_matrix_cocycle(&system, r, &u, &random::unipotent_alpha(&group), SOLUTION_TOL, &limits).unwrap();
        for o in enumerate_periodic_orbits(system.sft(), 5, &limits).unwrap() {
            let base = cyclic_product(f.values(), o.word()).unwrap();
            let trace = |m: &Mat| (0..m.dim()).map(|i| m.get(i, i)).sum::<f64>();
            for k in 1..o.period() {
                let rotated = cyclic_product(f.values(), &o.word().rotate(k)).unwrap();
                prop_assert!((trace(&base) - trace(&rotated)).abs() <= 1e-9 * trace(&base).abs().max(1.0));
            }
        }
    }

    #[test]
    fn compact_and_nilpotent_distortion(seed in any::<u64>()) {
        let limits = Limits::default();
        let mut rng = random::rng(seed);
        let sft = random::irreducible_sft(&mut rng, 2, 0.75);
        let rot = livsic_core::cocycle::LocallyConstantCocycle::from_fn(sft.clone(), 1, |_| {
            Mat::rotation2(rand::Rng::gen_range(&mut rng, -3.0..3.0))
        }).unwrap();
        let rot = MatrixCocycle::new(rot, Some(so2_algebra()), 1e-9).unwrap();
        let report = estimate_distortion(&rot, 6, AdMode::Declared, &limits).unwrap();
        prop_assert!(report.mu_s_sequence.iter().chain(&report.mu_u_sequence).all(|m| (m - 1.0).abs() <= 1e-6));
        let uni = livsic_core::cocycle::LocallyConstantCocycle::from_fn(sft, 0, |_| {
            let mut c = || rand::Rng::gen_range(&mut rng, -1.0..1.0);
            Mat::unipotent3(c(), c(), c())
        }).unwrap();
        let uni = MatrixCocycle::new(uni, Some(heisenberg_algebra()), 1e-9).unwrap();
        let report = estimate_distortion(&uni, 8, AdMode::Declared, &limits).unwrap();
        prop_assert!((report.mu_s - 1.0).abs() <= 1e-6 && (report.mu_u - 1.0).abs() <= 1e-6);
    }
}
