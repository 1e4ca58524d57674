//! Brute-force reference implementations used to cross-check the solvers.
//!
//! Nothing here calls the graph algorithms, orbit enumerators or solvers of
//! the rest of the crate: every check re-derives its answer from the
//! transition matrix, the group multiplication and the raw cocycle values.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::CohomologySolution;
use crate::cocycle::{LocallyConstantCocycle, RationalCocycle};
use crate::group::{Group, GroupElement};
use crate::matrix::Mat;
use crate::nonabelian::{MatrixCocycle, MatrixSolution};
use crate::skew::SkewSystem;
use crate::{Error, Limits, Rational, Result, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub max_period: usize,
    /// Largest product state space explored by reachability.
    pub max_state_count: usize,
    /// Largest number of words any exhaustive scan may visit.
    pub max_words: u64,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_period: 10, max_state_count: 4096, max_words: 50_000_000, tolerance: 1e-9 }
    }
}

impl OracleConfig {
    /// Clamps the caps to the global limits.
    pub fn within(limits: &Limits) -> Self {
        let d = OracleConfig::default();
        OracleConfig {
            max_period: d.max_period.min(limits.max_period),
            max_state_count: d.max_state_count.min(limits.max_states),
            ..d
        }
    }
}

fn finite_order(system: &SkewSystem) -> Result<usize> {
    match system.group() {
        Group::Finite(g) => Ok(g.order()),
        Group::FreeAbelian { .. } => Err(Error::InfiniteGroup),
    }
}

fn fiber_step(system: &SkewSystem, symbol: u8, g: &GroupElement) -> GroupElement {
    system.group().mul(system.psi(symbol), g)
}

/// Breadth-first search from every state `(symbol, g)` of the skew
/// product; true iff every state reaches every other.
pub fn brute_transitivity(system: &SkewSystem, config: &OracleConfig) -> Result<bool> {
    let order = finite_order(system)?;
    let k = system.sft().alphabet_size();
    let states = k * order;
    if states > config.max_state_count {
        return Err(Error::StateSpaceTooLarge { states, cap: config.max_state_count });
    }
    for start in 0..states {
        let mut seen = vec![false; states];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            let (s, g) = ((v / order) as u8, v % order);
            let next_g = fiber_step(system, s, &GroupElement::Finite(g)).index().unwrap();
            for t in 0..k as u8 {
                if system.sft().allows(s, t) {
                    let w = t as usize * order + next_g;
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        if count != states {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Calls `visit` on every cyclically admissible word of length
/// `1..=max_period`, shortest first, lexicographic within a length. Stops
/// early when `visit` returns true.
fn scan_cyclic_words(
    system: &SkewSystem,
    max_period: usize,
    config: &OracleConfig,
    mut visit: impl FnMut(&[u8]) -> Result<bool>,
) -> Result<bool> {
    let k = system.sft().alphabet_size();
    let total: u64 = (1..=max_period as u32).map(|n| (k as u64).saturating_pow(n)).fold(0, u64::saturating_add);
    if total > config.max_words {
        return Err(Error::StateSpaceTooLarge { states: usize::try_from(total).unwrap_or(usize::MAX), cap: config.max_words as usize });
    }
    for n in 1..=max_period {
        let mut word = vec![0u8; n];
        loop {
            let linear = word.windows(2).all(|p| system.sft().allows(p[0], p[1]));
            if linear && system.sft().allows(word[n - 1], word[0]) && visit(&word)? {
                return Ok(true);
            }
            // Odometer increment.
            let mut i = n;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                word[i] += 1;
                if (word[i] as usize) < k {
                    break;
                }
                word[i] = 0;
            }
            if word.iter().all(|&s| s == 0) {
                break;
            }
        }
    }
    Ok(false)
}

fn return_element(system: &SkewSystem, word: &[u8]) -> GroupElement {
    let mut g = system.group().identity();
    for &s in word {
        g = fiber_step(system, s, &g);
    }
    g
}

fn window(word: &[u8], start: usize, len: usize) -> Word {
    Word((0..len).map(|i| word[(start + i) % word.len()]).collect())
}

fn cyclic_sum(f: &RationalCocycle, word: &[u8]) -> Rational {
    (0..word.len()).fold(Rational::zero(), |acc, i| acc + &f.values()[&window(word, i, f.range() + 1)])
}

fn cyclic_product(f: &LocallyConstantCocycle<Mat>, word: &[u8], dim: usize) -> Mat {
    (0..word.len()).fold(Mat::identity(dim), |acc, i| f.values()[&window(word, i, f.range() + 1)].mul(&acc))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteViolation {
    pub word: Word,
    pub sum: Rational,
}

/// Every cyclically admissible word up to `max_period`, primitive or not:
/// the first one that lifts closed with a nonzero sum.
pub fn brute_vanishing(
    system: &SkewSystem,
    f: &RationalCocycle,
    max_period: usize,
    config: &OracleConfig,
) -> Result<Option<BruteViolation>> {
    let mut found = None;
    scan_cyclic_words(system, max_period, config, |w| {
        if !system.group().is_identity(&return_element(system, w)) {
            return Ok(false);
        }
        let sum = cyclic_sum(f, w);
        if sum.is_zero() {
            return Ok(false);
        }
        found = Some(BruteViolation { word: Word(w.to_vec()), sum });
        Ok(true)
    })?;
    Ok(found)
}

/// Least rotation by trying every rotation.
pub fn brute_canonical(word: &[u8]) -> Word {
    (0..word.len()).map(|i| window(word, i, word.len())).min().unwrap_or_default()
}

/// Canonical forms of the base projections of every closed walk of length
/// `1..=max_len` in the skew product, starting from every fiber over every
/// symbol (for `Z^d`, from the zero fiber).
pub fn brute_product_cycles(system: &SkewSystem, max_len: usize, config: &OracleConfig) -> Result<BTreeSet<Word>> {
    let starts: Vec<GroupElement> = match system.group() {
        Group::Finite(g) => (0..g.order()).map(GroupElement::Finite).collect(),
        Group::FreeAbelian { .. } => vec![system.group().identity()],
    };
    let k = system.sft().alphabet_size();
    let mut out = BTreeSet::new();
    let mut visited: u64 = 0;
    for s0 in 0..k as u8 {
        for g0 in &starts {
            // (word so far, current fiber)
            let mut stack = vec![(vec![s0], fiber_step(system, s0, g0))];
            while let Some((word, g)) = stack.pop() {
                visited += 1;
                if visited > config.max_words {
                    return Err(Error::StateSpaceTooLarge { states: visited as usize, cap: config.max_words as usize });
                }
                let last = *word.last().unwrap();
                if system.sft().allows(last, s0) && g == *g0 {
                    out.insert(brute_canonical(&word));
                }
                if word.len() < max_len {
                    for t in 0..k as u8 {
                        if system.sft().allows(last, t) {
                            let mut next = word.clone();
                            next.push(t);
                            let h = fiber_step(system, t, &g);
                            stack.push((next, h));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Number of cyclically admissible words of length `n` (points of period
/// dividing `n`), by enumeration.
pub fn brute_periodic_points(system_sft: &crate::sft::SftSpec, n: usize) -> u64 {
    let k = system_sft.alphabet_size();
    let mut count = 0u64;
    let mut stack: Vec<Vec<u8>> = (0..k as u8).map(|s| vec![s]).collect();
    while let Some(w) = stack.pop() {
        let last = *w.last().unwrap();
        if w.len() == n {
            if system_sft.allows(last, w[0]) {
                count += 1;
            }
            continue;
        }
        for t in 0..k as u8 {
            if system_sft.allows(last, t) {
                let mut x = w.clone();
                x.push(t);
                stack.push(x);
            }
        }
    }
    count
}

/// A claimed abelian witness: the word is cyclically admissible, lifts
/// closed, and has the claimed nonzero sum.
pub fn revalidate_witness(system: &SkewSystem, f: &RationalCocycle, word: &Word, claimed: &Rational) -> bool {
    let w = word.symbols();
    !w.is_empty()
        && (0..w.len()).all(|i| system.sft().allows(w[i], w[(i + 1) % w.len()]))
        && system.group().is_identity(&return_element(system, w))
        && cyclic_sum(f, w) == *claimed
        && !claimed.is_zero()
}

/// A claimed matrix witness: the word lifts closed and its ordered product
/// is farther than `tol` from the identity.
pub fn revalidate_matrix_witness(system: &SkewSystem, f: &MatrixCocycle, word: &Word, tol: f64) -> bool {
    let w = word.symbols();
    !w.is_empty()
        && (0..w.len()).all(|i| system.sft().allows(w[i], w[(i + 1) % w.len()]))
        && system.group().is_identity(&return_element(system, w))
        && cyclic_product(f.values(), w, f.dim()).sub(&Mat::identity(f.dim())).frobenius_norm() > tol
}

fn random_word(rng: &mut ChaCha8Rng, system: &SkewSystem, len: usize) -> Vec<u8> {
    let k = system.sft().alphabet_size() as u8;
    let mut w = vec![rng.gen_range(0..k)];
    while w.len() < len {
        let last = *w.last().unwrap();
        let options: Vec<u8> = (0..k).filter(|&t| system.sft().allows(last, t)).collect();
        w.push(options[rng.gen_range(0..options.len())]);
    }
    w
}

pub const SAMPLE_WORDS: usize = 1000;
pub const SAMPLE_LENGTH: usize = 50;

/// Telescoping check on 1000 seeded random words of length 50: the sum of
/// `f` over the first `n` windows equals
/// `u(last block) - u(first block) + alpha(psi_n)`, exactly.
pub fn brute_solution_check(system: &SkewSystem, f: &RationalCocycle, solution: &CohomologySolution, seed: u64) -> bool {
    let r = solution.block_length;
    if r < f.range() {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLE_WORDS {
        let w = random_word(&mut rng, system, SAMPLE_LENGTH);
        let n = SAMPLE_LENGTH - r;
        let mut sum = Rational::zero();
        for i in 0..n {
            sum += &f.values()[&Word(w[i..i + f.range() + 1].to_vec())];
        }
        let (Some(end), Some(start)) = (solution.u.get(&Word(w[n..n + r].to_vec())), solution.u.get(&Word(w[..r].to_vec()))) else {
            return false;
        };
        let Some(a) = solution.alpha.eval(&return_element(system, &w[..n])) else { return false };
        if sum != end - start + a {
            return false;
        }
    }
    true
}

/// Matrix analogue: `f_n = alpha(psi_n) u(last block) u(first block)^-1`
/// within `tol` relative to the size of the right-hand side.
pub fn brute_matrix_solution_check(system: &SkewSystem, f: &MatrixCocycle, solution: &MatrixSolution, tol: f64, seed: u64) -> bool {
    let r = solution.block_length;
    let range = f.values().range();
    if r < range {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLE_WORDS {
        let w = random_word(&mut rng, system, SAMPLE_LENGTH);
        let n = SAMPLE_LENGTH - r;
        let mut prod = Mat::identity(f.dim());
        for i in 0..n {
            prod = f.values().values()[&Word(w[i..i + range + 1].to_vec())].mul(&prod);
        }
        let (Some(end), Some(start)) = (solution.u.get(&Word(w[n..n + r].to_vec())), solution.u.get(&Word(w[..r].to_vec()))) else {
            return false;
        };
        let Some(start_inv) = start.inverse(1e-12) else { return false };
        let Some(g) = return_element(system, &w[..n]).index() else { return false };
        let Some(a) = solution.alpha.get(g) else { return false };
        let rhs = a.mul(end).mul(&start_inv);
        if prod.sub(&rhs).frobenius_norm() > tol * rhs.frobenius_norm().max(1.0) {
            return false;
        }
    }
    true
}

/// Simple cycles of the symbol graph, each listed once from its least symbol.
fn simple_cycles(system: &SkewSystem) -> Vec<Vec<u8>> {
    let k = system.sft().alphabet_size() as u8;
    let mut out = Vec::new();
    for s0 in 0..k {
        let mut stack = vec![vec![s0]];
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            if system.sft().allows(last, s0) {
                out.push(path.clone());
            }
            for t in s0 + 1..k {
                if system.sft().allows(last, t) && !path.contains(&t) {
                    let mut next = path.clone();
                    next.push(t);
                    stack.push(next);
                }
            }
        }
    }
    out
}

fn vector_sum(system: &SkewSystem, word: &[u8]) -> Option<Vec<i64>> {
    match return_element(system, word) {
        GroupElement::Vector(v) => Some(v),
        GroupElement::Finite(_) => None,
    }
}

/// A claimed integer circulation on the `r`-block graph of a `Z^d`
/// extension: every edge word is admissible, flow is conserved at every
/// block, the `psi`-weight is zero and the `f`-weight equals `weight != 0`.
pub fn revalidate_circulation(
    system: &SkewSystem,
    f: &RationalCocycle,
    block_length: usize,
    circulation: &[(Word, BigInt)],
    weight: &Rational,
) -> bool {
    let Group::FreeAbelian { rank } = system.group() else { return false };
    let r = block_length;
    if r < f.range() || weight.is_zero() {
        return false;
    }
    let mut balance: BTreeMap<Word, BigInt> = BTreeMap::new();
    let mut psi = vec![BigInt::zero(); *rank];
    let mut total = Rational::zero();
    for (edge, m) in circulation {
        let w = edge.symbols();
        if w.len() != r + 1 || !w.windows(2).all(|p| system.sft().allows(p[0], p[1])) {
            return false;
        }
        *balance.entry(Word(w[..r].to_vec())).or_default() += m;
        *balance.entry(Word(w[1..].to_vec())).or_default() -= m;
        let v = vector_sum(system, &w[..1]).expect("free abelian");
        for (acc, x) in psi.iter_mut().zip(v) {
            *acc += m * BigInt::from(x);
        }
        total += Rational::from_integer(m.clone()) * &f.values()[&Word(w[..f.range() + 1].to_vec())];
    }
    balance.values().all(Zero::is_zero) && psi.iter().all(Zero::is_zero) && total == *weight
}

/// A claimed drift certificate: the least mean of `functional . psi` over
/// simple cycles of the symbol graph equals `min_mean`, and it is positive.
pub fn revalidate_drift(system: &SkewSystem, functional: &[Rational], min_mean: &Rational) -> bool {
    let mut best: Option<Rational> = None;
    for c in simple_cycles(system) {
        let Some(v) = vector_sum(system, &c) else { return false };
        if v.len() != functional.len() {
            return false;
        }
        let dot = v.iter().zip(functional).fold(Rational::zero(), |acc, (&x, a)| acc + a * Rational::from_integer(x.into()));
        let mean = dot / Rational::from_integer(BigInt::from(c.len()));
        if best.as_ref().map_or(true, |b| mean < *b) {
            best = Some(mean);
        }
    }
    best.is_some_and(|b| b == *min_mean && b > Rational::zero())
}

/// Whether the return vectors of the simple cycles generate a proper
/// subgroup of `Z^d`: the gcd of all `d x d` minors differs from 1.
pub fn brute_lattice_is_proper(system: &SkewSystem) -> Option<bool> {
    let Group::FreeAbelian { rank: d } = system.group() else { return None };
    let d = *d;
    let vectors: Vec<Vec<i64>> = simple_cycles(system).iter().map(|c| vector_sum(system, c).unwrap()).collect();
    let mut g = BigInt::zero();
    let mut pick = Vec::with_capacity(d);
    minors_gcd(&vectors, d, 0, &mut pick, &mut g);
    Some(!g.is_one())
}

fn minors_gcd(vectors: &[Vec<i64>], d: usize, from: usize, pick: &mut Vec<usize>, g: &mut BigInt) {
    if g.is_one() {
        return;
    }
    if pick.len() == d {
        let m: Vec<Vec<BigInt>> = pick.iter().map(|&i| vectors[i].iter().map(|&x| BigInt::from(x)).collect()).collect();
        *g = g.gcd(&determinant(m));
        return;
    }
    for i in from..vectors.len() {
        pick.push(i);
        minors_gcd(vectors, d, i + 1, pick, g);
        pick.pop();
    }
}

/// Cofactor expansion; `d` is tiny here.
fn determinant(m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut det = BigInt::zero();
    for j in 0..n {
        let minor: Vec<Vec<BigInt>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * determinant(minor);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{generate_cocycle, solve, Alpha, SolveOutcome};
    use crate::group::{FiniteGroup, GroupSpec};
    use crate::sft::SftSpec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn c2(psi: [usize; 2]) -> SkewSystem {
        let g = Group::Finite(FiniteGroup::cyclic(2).unwrap());
        SkewSystem::new(SftSpec::full_shift(2), g, psi.iter().map(|&i| GroupElement::Finite(i)).collect()).unwrap()
    }

    fn balanced() -> (SkewSystem, RationalCocycle) {
        let g = Group::build(&GroupSpec::FreeAbelian { rank: 1 }, &Limits::default()).unwrap();
        let s = SkewSystem::new(SftSpec::full_shift(2), g, vec![GroupElement::Vector(vec![1]), GroupElement::Vector(vec![-1])]).unwrap();
        let u = [(w("1"), q(0, 1)), (w("2"), q(1, 1))].into_iter().collect();
        let f = generate_cocycle(&s, 1, &u, &Alpha::Linear(vec![q(1, 2)]), &Limits::default()).unwrap();
        (s, f)
    }

    #[test]
    fn transitivity_examples() {
        let cfg = OracleConfig::default();
        assert!(brute_transitivity(&c2([0, 1]), &cfg).unwrap());
        assert!(!brute_transitivity(&c2([0, 0]), &cfg).unwrap());
        let trivial = Group::Finite(FiniteGroup::cyclic(1).unwrap());
        let golden = SkewSystem::new(SftSpec::golden_mean(), trivial, vec![GroupElement::Finite(0); 2]).unwrap();
        assert!(brute_transitivity(&golden, &cfg).unwrap());
    }

    #[test]
    fn vanishing_examples() {
        let cfg = OracleConfig::default();
        let (s, mut f) = balanced();
        assert_eq!(brute_vanishing(&s, &f, 8, &cfg).unwrap(), None);
        f.set(&w("22"), Rational::zero()).unwrap();
        let v = brute_vanishing(&s, &f, 8, &cfg).unwrap().unwrap();
        assert_eq!(brute_canonical(v.word.symbols()), w("1122"));
        assert_eq!(v.sum, q(1, 2));
        let zero = RationalCocycle::zero(SftSpec::full_shift(2), 1).unwrap();
        assert_eq!(brute_vanishing(&c2([0, 1]), &zero, 8, &cfg).unwrap(), None);
    }

    #[test]
    fn solution_check_examples() {
        let limits = Limits::default();
        let (s, f) = balanced();
        let SolveOutcome::Solved(sol) = solve(&s, &f, &limits).unwrap() else { panic!() };
        assert!(brute_solution_check(&s, &f, &sol, 1));
        let mut bad = sol.clone();
        *bad.u.get_mut(&w("2")).unwrap() += q(1, 3);
        assert!(!brute_solution_check(&s, &f, &bad, 1));
        let zero = RationalCocycle::zero(SftSpec::full_shift(2), 1).unwrap();
        let none = CohomologySolution {
            block_length: 1,
            u: [(w("1"), q(0, 1)), (w("2"), q(0, 1))].into_iter().collect(),
            alpha: Alpha::zero_for(c2([0, 1]).group()),
        };
        assert!(brute_solution_check(&c2([0, 1]), &zero, &none, 1));
    }

    #[test]
    fn product_cycles_and_points() {
        let cfg = OracleConfig::default();
        let cycles = brute_product_cycles(&c2([0, 1]), 2, &cfg).unwrap();
        assert_eq!(cycles.into_iter().collect::<Vec<_>>(), [w("1"), w("11"), w("22")]);
        assert_eq!(brute_periodic_points(&SftSpec::golden_mean(), 5), 11);
    }
    #[test]
    fn certificate_rechecks() {
        let limits = Limits::default();
        let z1 = Group::build(&GroupSpec::FreeAbelian { rank: 1 }, &limits).unwrap();
        let up = SkewSystem::new(SftSpec::full_shift(2), z1.clone(), vec![GroupElement::Vector(vec![1]), GroupElement::Vector(vec![1])]).unwrap();
        assert!(revalidate_drift(&up, &[q(1, 1)], &q(1, 1)));
        assert!(!revalidate_drift(&up, &[q(1, 1)], &q(1, 2)));
        let even = SkewSystem::new(SftSpec::full_shift(2), z1, vec![GroupElement::Vector(vec![2]), GroupElement::Vector(vec![-2])]).unwrap();
        assert_eq!(brute_lattice_is_proper(&even), Some(true));
        let (s, f) = balanced();
        assert_eq!(brute_lattice_is_proper(&s), Some(false));
        let mut bad = f.clone();
        bad.set(&w("22"), q(0, 1)).unwrap();
        let circ = [(w("12"), BigInt::from(1)), (w("21"), BigInt::from(1)), (w("11"), BigInt::from(1)), (w("22"), BigInt::from(1))];
        assert!(revalidate_circulation(&s, &bad, 1, &circ, &q(1, 2)));
        assert!(!revalidate_circulation(&s, &f, 1, &circ, &q(1, 2)));
        assert!(!revalidate_circulation(&s, &bad, 1, &circ[..3], &q(1, 2)));
    }
}
