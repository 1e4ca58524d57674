mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use livsic_core::oracle::{brute_periodic_points, brute_product_cycles, brute_transitivity, OracleConfig};
use livsic_core::random;
use livsic_core::sft::{count_periodic_points, enumerate_periodic_orbits};
use livsic_core::skew::{check_transitivity, closed_lifts, enumerate_trivial_class_orbits, TransitivityVerdict};
use livsic_core::{Limits, Word};
use num_bigint::BigUint;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transitivity_matches_reachability(seed in any::<u64>()) {
        let limits = Limits::default();
        let mut rng = random::rng(seed);
        let k = rng.gen_range(2..=4);
        let sft = random::irreducible_sft(&mut rng, k, 0.5);
        let group = random::small_group(&mut rng);
        let psi = (0..k).map(|_| livsic_core::group::GroupElement::Finite(rng.gen_range(0..group.order()))).collect();
        let system = livsic_core::skew::SkewSystem::new(sft, livsic_core::group::Group::Finite(group), psi).unwrap();
        let fast = check_transitivity(&system, &limits).unwrap() == TransitivityVerdict::Transitive;
        prop_assert_eq!(fast, brute_transitivity(&system, &OracleConfig::default()).unwrap());
    }

    #[test]
    fn trivial_orbits_are_projected_cycles(seed in any::<u64>(), finite in any::<bool>()) {
        let limits = Limits::default();
        let mut rng = random::rng(seed);
        let (system, _) = if finite { common::finite_instance(&mut rng, 4) } else { common::free_abelian_instance(&mut rng, 4) };
        let cycles = brute_product_cycles(&system, 8, &OracleConfig::default()).unwrap();
        let primitive: BTreeSet<Word> = cycles.iter().filter(|w| w.is_primitive()).cloned().collect();
        let trivial: BTreeSet<Word> =
            enumerate_trivial_class_orbits(&system, 8, &limits).unwrap().into_iter().map(|(o, _)| o.word().clone()).collect();
        prop_assert_eq!(&trivial, &primitive);
        // Every closed walk is a multiple of the least closed lift.
        let mut lifts = BTreeSet::new();
        for (o, m) in closed_lifts(&system, 8, &limits).unwrap() {
            let mut j = m;
            while j * o.period() <= 8 {
                lifts.insert(o.word().repeat(j));
                j += m;
            }
        }
        prop_assert_eq!(lifts, cycles);
    }

    #[test]
    fn periodic_point_census(seed in any::<u64>()) {
        let limits = Limits::default();
        let mut rng = random::rng(seed);
        let k = rng.gen_range(2..=4);
        let sft = random::irreducible_sft(&mut rng, k, 0.5);
        let orbits = enumerate_periodic_orbits(&sft, 9, &limits).unwrap();
        for n in 1..=9 {
            let from_orbits: usize = orbits.iter().filter(|o| n % o.period() == 0).map(|o| o.period()).sum();
            prop_assert_eq!(count_periodic_points(&sft, n), BigUint::from(from_orbits));
            prop_assert_eq!(brute_periodic_points(&sft, n), from_orbits as u64);
        }
    }
}
