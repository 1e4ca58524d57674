//! Seeded generators for shifts, skew systems, potentials and homomorphisms.
//! Everything is a pure function of the seed.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::Alpha;
use crate::group::{FiniteGroup, Group, GroupElement};
use crate::matrix::Mat;
use crate::sft::{admissible_words, validate_sft, SftSpec};
use crate::skew::{check_transitivity, cycle_lattice, strictly_positive_relation, SkewSystem, TransitivityVerdict};
use crate::{Limits, Rational, Result, Word};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational with numerator in `-max_num..=max_num` and denominator in
/// `1..=max_den`.
pub fn rational(rng: &mut SeededRng, max_num: i64, max_den: i64) -> Rational {
    Rational::new(rng.gen_range(-max_num..=max_num).into(), rng.gen_range(1..=max_den).into())
}

pub fn nonzero_rational(rng: &mut SeededRng, max_num: i64, max_den: i64) -> Rational {
    let num = loop {
        let n = rng.gen_range(-max_num..=max_num);
        if n != 0 {
            break n;
        }
    };
    Rational::new(num.into(), rng.gen_range(1..=max_den).into())
}

/// Irreducible transition matrix on `k` symbols, each entry 1 with
/// probability `density` (resampled until irreducible).
pub fn irreducible_sft(rng: &mut SeededRng, k: usize, density: f64) -> SftSpec {
    loop {
        let rows: Vec<Vec<u8>> = (0..k).map(|_| (0..k).map(|_| rng.gen_bool(density) as u8).collect()).collect();
        if let Ok(spec) = SftSpec::new(&rows) {
            if validate_sft(&spec).is_ok() {
                return spec;
            }
        }
    }
}

/// Cyclic group of order 2..=8, `S3` or `Q8`, uniformly among the three
/// families.
pub fn small_group(rng: &mut SeededRng) -> FiniteGroup {
    match rng.gen_range(0..3) {
        0 => FiniteGroup::cyclic(rng.gen_range(2..=8)).expect("positive order"),
        1 => FiniteGroup::symmetric3(),
        _ => FiniteGroup::quaternion(),
    }
}

/// Random `psi` into `group` over `sft`, resampled until the skew product
/// is transitive. Gives up after `attempts` tries.
pub fn transitive_finite_system(
    rng: &mut SeededRng,
    sft: &SftSpec,
    group: &FiniteGroup,
    attempts: usize,
    limits: &Limits,
) -> Result<Option<SkewSystem>> {
    let g = Group::Finite(group.clone());
    for _ in 0..attempts {
        let psi = (0..sft.alphabet_size()).map(|_| GroupElement::Finite(rng.gen_range(0..group.order()))).collect();
        let system = SkewSystem::new(sft.clone(), g.clone(), psi)?;
        if check_transitivity(&system, limits)? == TransitivityVerdict::Transitive {
            return Ok(Some(system));
        }
    }
    Ok(None)
}

/// Random `psi` into `Z^d` with entries in `-2..=2`, resampled until the
/// cycle lattice is all of `Z^d` and zero is a strictly positive
/// combination of the symbol-graph cycle means. The second condition puts
/// every edge on a balanced cycle.
pub fn balanced_free_abelian_system(
    rng: &mut SeededRng,
    sft: &SftSpec,
    rank: usize,
    attempts: usize,
    limits: &Limits,
) -> Result<Option<SkewSystem>> {
    let g = Group::build(&crate::group::GroupSpec::FreeAbelian { rank }, limits)?;
    let orbits = crate::sft::enumerate_periodic_orbits(sft, sft.alphabet_size().min(limits.max_period), limits)?;
    for _ in 0..attempts {
        let psi: Vec<GroupElement> =
            (0..sft.alphabet_size()).map(|_| GroupElement::Vector((0..rank).map(|_| rng.gen_range(-2..=2)).collect())).collect();
        let system = SkewSystem::new(sft.clone(), g.clone(), psi)?;
        if !cycle_lattice(&system, rank)?.full {
            continue;
        }
        let points: Vec<Vec<Rational>> = orbits
            .iter()
            .map(|o| {
                let v = system.return_element(o.word().symbols());
                let p = Rational::from_integer(o.period().into());
                v.vector().unwrap().iter().map(|&x| Rational::from_integer(x.into()) / &p).collect()
            })
            .collect();
        if covers_every_edge(&system, &orbits, &points, rank) {
            return Ok(Some(system));
        }
    }
    Ok(None)
}

/// Whether the simple cycles with a strictly positive balanced combination
/// cover every edge of the symbol graph.
fn covers_every_edge(system: &SkewSystem, orbits: &[crate::sft::PeriodicOrbit], points: &[Vec<Rational>], rank: usize) -> bool {
    if strictly_positive_relation(points, rank).is_none() {
        return false;
    }
    let k = system.sft().alphabet_size();
    let mut seen = alloc::vec![false; k * k];
    for o in orbits {
        let w = o.word().symbols();
        for i in 0..w.len() {
            seen[w[i] as usize * k + w[(i + 1) % w.len()] as usize] = true;
        }
    }
    (0..k * k).all(|e| seen[e] || !system.sft().allows((e / k) as u8, (e % k) as u8))
}

/// Random rational `u` on the admissible `r`-blocks.
pub fn potential(rng: &mut SeededRng, sft: &SftSpec, r: usize) -> Result<BTreeMap<Word, Rational>> {
    Ok(admissible_words(sft, r, usize::MAX)?.into_iter().map(|w| (w, rational(rng, 9, 9))).collect())
}

/// Zero on finite groups, a random rational vector on `Z^d`.
pub fn alpha(rng: &mut SeededRng, group: &Group) -> Alpha {
    match group {
        Group::Finite(_) => Alpha::zero_for(group),
        Group::FreeAbelian { rank } => Alpha::Linear((0..*rank).map(|_| rational(rng, 9, 9)).collect()),
    }
}

/// Random rotations on the admissible `r`-blocks.
pub fn so2_potential(rng: &mut SeededRng, sft: &SftSpec, r: usize) -> Result<BTreeMap<Word, Mat>> {
    Ok(admissible_words(sft, r, usize::MAX)?.into_iter().map(|w| (w, Mat::rotation2(rng.gen_range(-PI..PI)))).collect())
}

/// Random upper unitriangular `3 x 3` matrices on the admissible `r`-blocks.
pub fn unipotent_potential(rng: &mut SeededRng, sft: &SftSpec, r: usize) -> Result<BTreeMap<Word, Mat>> {
    Ok(admissible_words(sft, r, usize::MAX)?
        .into_iter()
        .map(|w| (w, Mat::unipotent3(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))))
        .collect())
}

/// A random homomorphism `group -> SO(2)`, through a circle character.
pub fn so2_alpha(rng: &mut SeededRng, group: &FiniteGroup) -> Vec<Mat> {
    let chars = group.circle_characters();
    let chi = chars.choose(rng).expect("the trivial character always exists");
    chi.iter().map(|&(num, den)| Mat::rotation2(2.0 * PI * num as f64 / den as f64)).collect()
}

/// The only homomorphism from a finite group into the unipotent group.
pub fn unipotent_alpha(group: &FiniteGroup) -> Vec<Mat> {
    (0..group.order()).map(|_| Mat::identity(3)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generators_repeat() {
        let a = irreducible_sft(&mut rng(7), 4, 0.5);
        let b = irreducible_sft(&mut rng(7), 4, 0.5);
        assert_eq!(a, b);
        assert_eq!(rational(&mut rng(3), 9, 9), rational(&mut rng(3), 9, 9));
    }

    #[test]
    fn systems_have_requested_properties() {
        let limits = Limits::default();
        let mut r = rng(11);
        for _ in 0..10 {
            let sft = irreducible_sft(&mut r, 3, 0.5);
            let g = small_group(&mut r);
            if let Some(s) = transitive_finite_system(&mut r, &sft, &g, 50, &limits).unwrap() {
                assert_eq!(check_transitivity(&s, &limits).unwrap(), TransitivityVerdict::Transitive);
            }
            if let Some(s) = balanced_free_abelian_system(&mut r, &sft, 1, 50, &limits).unwrap() {
                assert!(cycle_lattice(&s, 1).unwrap().full);
            }
        }
    }

    #[test]
    fn so2_alpha_is_a_homomorphism() {
        let g = FiniteGroup::cyclic(6).unwrap();
        let mut r = rng(5);
        for _ in 0..5 {
            let a = so2_alpha(&mut r, &g);
            for x in 0..6 {
                for y in 0..6 {
                    assert!(a[g.mul(x, y)].sub(&a[x].mul(&a[y])).max_abs() < 1e-12);
                }
            }
        }
    }
}
