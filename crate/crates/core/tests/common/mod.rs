#![allow(dead_code)]

use rand::Rng;

use livsic_core::random::{self, SeededRng};
use livsic_core::skew::SkewSystem;
use livsic_core::Limits;

/// A transitive finite-group system and a block length in `1..=2`.
pub fn finite_instance(rng: &mut SeededRng, max_k: usize) -> (SkewSystem, usize) {
    let limits = Limits::default();
    loop {
        let k = rng.gen_range(2..=max_k);
        let sft = random::irreducible_sft(rng, k, 0.5);
        let group = random::small_group(rng);
        if let Some(system) = random::transitive_finite_system(rng, &sft, &group, 20, &limits).unwrap() {
            return (system, rng.gen_range(1..=2));
        }
    }
}

/// A `Z^d` system (`d = 2` only when `k >= 3`) whose cycles generate
/// `Z^d` with every edge on a balanced cycle.
pub fn free_abelian_instance(rng: &mut SeededRng, max_k: usize) -> (SkewSystem, usize) {
    let limits = Limits::default();
    loop {
        let k = rng.gen_range(2..=max_k);
        let sft = random::irreducible_sft(rng, k, 0.5);
        let d = if k >= 3 { rng.gen_range(1..=2) } else { 1 };
        if let Some(system) = random::balanced_free_abelian_system(rng, &sft, d, 20, &limits).unwrap() {
            return (system, rng.gen_range(1..=2));
        }
    }
}
