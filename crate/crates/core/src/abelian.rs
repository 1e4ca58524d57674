//! Real-valued cocycles over skew products: checking the vanishing
//! hypothesis on closed lifts, and solving
//! `f = u o shift - u + alpha(psi)` exactly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cocycle::{cyclic_sum, RationalCocycle};
use crate::group::{Group, GroupElement};
use crate::lattice::LatticeReport;
use crate::linalg::{nonnegative_solution, solve_rational, LinearSolution};
use crate::sft::{build_block_graph, BlockGraph, PeriodicOrbit};
use crate::skew::{build_product_graph, closed_lifts, cycle_lattice, lift_order, NonTransitivity, SkewSystem};
use crate::{Error, Limits, Rational, Result, Word};

/// Longest closed walk the `Z^d` solver will build from an elimination
/// certificate before giving up and reporting the certificate itself.
const MAX_WITNESS_LENGTH: u64 = 1 << 20;

/// A periodic orbit that lifts closed and carries a nonzero Birkhoff sum.
///
/// `orbit` is primitive; the closed lift is `orbit` traversed
/// `repetitions` times, the least count whose return element is the
/// identity. `sum` is the Birkhoff sum over the whole lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationWitness {
    pub orbit: PeriodicOrbit,
    pub repetitions: usize,
    pub sum: Rational,
}

impl ViolationWitness {
    pub fn period(&self) -> usize {
        self.orbit.period() * self.repetitions
    }

    /// The full closed word, `orbit` repeated.
    pub fn word(&self) -> Word {
        self.orbit.word().repeat(self.repetitions)
    }
}

/// Homomorphism part of a solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Alpha {
    /// Value on every element of a finite group, in element order.
    Finite(Vec<Rational>),
    /// `alpha(v) = a . v` on `Z^d`.
    Linear(Vec<Rational>),
}

impl Alpha {
    pub fn zero_for(group: &Group) -> Alpha {
        match group {
            Group::Finite(g) => Alpha::Finite(vec![Rational::zero(); g.order()]),
            Group::FreeAbelian { rank } => Alpha::Linear(vec![Rational::zero(); *rank]),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Alpha::Finite(v) | Alpha::Linear(v) => v.iter().all(Zero::is_zero),
        }
    }

    /// `None` when the element does not fit this homomorphism.
    pub fn eval(&self, g: &GroupElement) -> Option<Rational> {
        match (self, g) {
            (Alpha::Finite(v), GroupElement::Finite(i)) => v.get(*i).cloned(),
            (Alpha::Linear(a), GroupElement::Vector(x)) if a.len() == x.len() => {
                Some(a.iter().zip(x).fold(Rational::zero(), |acc, (c, &xi)| acc + c * Rational::from_integer(xi.into())))
            }
            _ => None,
        }
    }
}

/// `u` on the `r`-blocks (lexicographically first block pinned to 0) and
/// `alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologySolution {
    pub block_length: usize,
    pub u: BTreeMap<Word, Rational>,
    pub alpha: Alpha,
}

/// Why a `Z^d` solve did not produce a unique answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degenerate {
    /// The equations are consistent but do not pin `alpha`: the listed
    /// coordinates were set to 0, and `alpha` is only determined on the
    /// cycle lattice.
    Underdetermined { solution: CohomologySolution, free_alpha: Vec<usize>, cycle_lattice: LatticeReport },
    /// The equations are inconsistent, but no periodic orbit witnessing it
    /// could be built. `circulation` gives an integer edge multiplicity
    /// (possibly negative) on the block graph with zero `psi`-weight and
    /// nonzero `f`-weight.
    Inconsistent { block_length: usize, circulation: Vec<(Word, BigInt)>, weight: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(CohomologySolution),
    Violation(ViolationWitness),
    NotTransitive(NonTransitivity),
    Degenerate(Degenerate),
}

fn check_cocycle(system: &SkewSystem, f: &RationalCocycle) -> Result<()> {
    if f.sft() != system.sft() {
        return Err(Error::CocycleMismatch("cocycle and system have different shifts".into()));
    }
    Ok(())
}

/// Checks that `f` sums to zero over every closed lift of total period at
/// most `max_period`, in order of period then word. Returns the first
/// violation.
pub fn verify_vanishing(
    system: &SkewSystem,
    f: &RationalCocycle,
    max_period: usize,
    limits: &Limits,
) -> Result<Option<ViolationWitness>> {
    check_cocycle(system, f)?;
    if max_period == 0 {
        return Ok(None);
    }
    for (orbit, m) in closed_lifts(system, max_period, limits)? {
        let sum = cyclic_sum(f, orbit.word())? * Rational::from_integer(BigInt::from(m));
        if !sum.is_zero() {
            return Ok(Some(ViolationWitness { orbit, repetitions: m, sum }));
        }
    }
    Ok(None)
}

/// Witness from any closed walk whose return element is trivial, reduced to
/// the least closed lift of its primitive root.
fn witness_from_word(system: &SkewSystem, f: &RationalCocycle, word: &Word) -> Result<Option<ViolationWitness>> {
    let p = word.primitive_period();
    let orbit = PeriodicOrbit::new(system.sft(), Word(word.symbols()[..p].to_vec()))?;
    let g = system.return_element(orbit.word().symbols());
    let Some(m) = lift_order(system.group(), &g) else { return Ok(None) };
    let sum = cyclic_sum(f, orbit.word())? * Rational::from_integer(BigInt::from(m));
    Ok((!sum.is_zero()).then_some(ViolationWitness { orbit, repetitions: m, sum }))
}

fn canonical_witness(system: &SkewSystem, f: &RationalCocycle, limits: &Limits) -> Result<Option<ViolationWitness>> {
    let depth = limits.witness_search_period.min(limits.max_period);
    match verify_vanishing(system, f, depth, limits) {
        Err(Error::RangeTooLarge { .. }) => Ok(None),
        other => other,
    }
}

/// Finite covering group: potential along a spanning tree of the product
/// graph. A nonzero cycle residual becomes a [`ViolationWitness`]; otherwise
/// `u(B) = u_hat(B, e)` and `alpha = 0`.
pub fn solve_finite_gamma(system: &SkewSystem, f: &RationalCocycle, limits: &Limits) -> Result<SolveOutcome> {
    check_cocycle(system, f)?;
    let group = system.group().as_finite()?;
    let r = f.block_length();
    let pg = build_product_graph(system, r, limits)?;
    let graph = pg.digraph();
    if let Some((a, b)) = graph.unreachable_pair() {
        return Ok(SolveOutcome::NotTransitive(NonTransitivity::Unreachable { from: pg.split(a), to: pg.split(b) }));
    }
    let base_values = f.edge_values(pg.base());
    let value = |e: usize| &base_values[pg.base_edge(e)];

    let (parent, order) = graph.bfs_tree(0);
    let mut pot: Vec<Rational> = vec![Rational::zero(); graph.vertex_count()];
    for &v in order.iter().skip(1) {
        let e = parent[v].expect("reachable vertex has a tree edge");
        let (t, _) = graph.edge(e);
        pot[v] = &pot[t] + value(e);
    }
    for e in 0..graph.edge_count() {
        let (t, h) = graph.edge(e);
        let residual = &pot[t] + value(e) - &pot[h];
        if residual.is_zero() {
            continue;
        }
        if let Some(w) = canonical_witness(system, f, limits)? {
            return Ok(SolveOutcome::Violation(w));
        }
        // Close the residual edge through the tree: the two loops at the
        // root differ in sum by exactly `residual`, so one is nonzero.
        let down = |v: usize| tree_path(graph, &parent, v);
        let back = graph.shortest_path(h, 0).expect("strongly connected");
        let mut through = down(t);
        through.push(e);
        through.extend(&back);
        let mut direct = down(h);
        direct.extend(&back);
        for walk in [through, direct] {
            if walk.is_empty() {
                continue;
            }
            if let Some(w) = witness_from_word(system, f, &pg.project_walk(&walk))? {
                return Ok(SolveOutcome::Violation(w));
            }
        }
        unreachable!("tree loops differ by a nonzero residual");
    }

    let id = group.identity();
    let blocks = pg.base().blocks();
    for b in 0..blocks.len() {
        let base = &pot[pg.vertex(b, id)];
        for g in 0..group.order() {
            assert!(pot[pg.vertex(b, g)] == *base, "fiber potential is not constant");
        }
    }
    let u = blocks.iter().enumerate().map(|(b, w)| (w.clone(), pot[pg.vertex(b, id)].clone())).collect();
    Ok(SolveOutcome::Solved(CohomologySolution { block_length: r, u, alpha: Alpha::zero_for(system.group()) }))
}

/// Edges of the tree path from the root to `v`.
fn tree_path(graph: &crate::graph::Digraph, parent: &[Option<usize>], mut v: usize) -> Vec<usize> {
    let mut path = Vec::new();
    while let Some(e) = parent[v] {
        path.push(e);
        v = graph.edge(e).0;
    }
    path.reverse();
    path
}

/// `Z^d` covering group: one exact linear solve for `u` on blocks and
/// `alpha`, with `u` of the first block fixed to 0.
pub fn solve_free_abelian(system: &SkewSystem, f: &RationalCocycle, limits: &Limits) -> Result<SolveOutcome> {
    check_cocycle(system, f)?;
    let Group::FreeAbelian { rank: d } = *system.group() else { return Err(Error::FiniteGroup) };
    let r = f.block_length();
    let base = build_block_graph(system.sft(), r, limits)?;
    let graph = base.digraph();
    if let Some((a, b)) = graph.unreachable_pair() {
        return Err(Error::NotStronglyConnected { from: a, to: b });
    }
    let nb = base.blocks().len();
    let values = f.edge_values(&base);
    let psi: Vec<&[i64]> = base.edges().iter().map(|e| system.psi(e.word.symbols()[0]).vector().unwrap()).collect();

    // Columns: u(1..nb) then alpha(0..d); u(0) is the gauge.
    let columns = nb - 1 + d;
    let rows: Vec<Vec<(usize, Rational)>> = base
        .edges()
        .iter()
        .zip(&psi)
        .map(|(e, p)| {
            let mut row = Vec::new();
            if e.head != e.tail {
                if e.head > 0 {
                    row.push((e.head - 1, Rational::one()));
                }
                if e.tail > 0 {
                    row.push((e.tail - 1, -Rational::one()));
                }
            }
            row.extend(p.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, &x)| (nb - 1 + j, Rational::from_integer(x.into()))));
            row
        })
        .collect();

    match solve_rational(&rows, &values, columns) {
        LinearSolution::Consistent { x, free } => {
            let mut u = BTreeMap::new();
            for (b, w) in base.blocks().iter().enumerate() {
                u.insert(w.clone(), if b == 0 { Rational::zero() } else { x[b - 1].clone() });
            }
            let solution = CohomologySolution { block_length: r, u, alpha: Alpha::Linear(x[nb - 1..].to_vec()) };
            let free_alpha: Vec<usize> = free.iter().filter(|&&c| c >= nb - 1).map(|&c| c - (nb - 1)).collect();
            debug_assert!(free.iter().all(|&c| c >= nb - 1), "block potentials are always pinned");
            if free_alpha.is_empty() {
                Ok(SolveOutcome::Solved(solution))
            } else {
                let cycle_lattice = cycle_lattice(system, d)?;
                Ok(SolveOutcome::Degenerate(Degenerate::Underdetermined { solution, free_alpha, cycle_lattice }))
            }
        }
        LinearSolution::Inconsistent { certificate } => {
            if let Some(w) = canonical_witness(system, f, limits)? {
                return Ok(SolveOutcome::Violation(w));
            }
            if let Some(w) = circulation_witness(system, f, &base, &psi, &certificate)? {
                return Ok(SolveOutcome::Violation(w));
            }
            let weight = certificate.iter().zip(&values).fold(Rational::zero(), |acc, (c, v)| acc + v * Rational::from_integer(c.clone()));
            let circulation = base.edges().iter().zip(certificate).map(|(e, c)| (e.word.clone(), c)).collect();
            Ok(SolveOutcome::Degenerate(Degenerate::Inconsistent { block_length: r, circulation, weight }))
        }
    }
}

/// Turns a signed balanced circulation `z` with nonzero `f`-weight into a
/// periodic orbit. Adds a large multiple of a strictly positive balanced
/// circulation `y` so the result is nonnegative, then follows an Euler
/// circuit. Fails when no such `y` exists or the walk would be huge.
fn circulation_witness(
    system: &SkewSystem,
    f: &RationalCocycle,
    base: &BlockGraph,
    psi: &[&[i64]],
    z: &[BigInt],
) -> Result<Option<ViolationWitness>> {
    let graph = base.digraph();
    let (nv, ne) = (graph.vertex_count(), graph.edge_count());
    let d = psi.first().map_or(0, |p| p.len());
    // y = 1 + v with v >= 0; rows: flow conservation, then psi balance.
    let mut a = vec![vec![Rational::zero(); ne]; nv + d];
    let mut b = vec![Rational::zero(); nv + d];
    for e in 0..ne {
        let (t, h) = graph.edge(e);
        a[h][e] += Rational::one();
        a[t][e] -= Rational::one();
        for j in 0..d {
            a[nv + j][e] = Rational::from_integer(psi[e][j].into());
        }
    }
    for (row, rhs) in a.iter().zip(b.iter_mut()) {
        *rhs = -row.iter().fold(Rational::zero(), |acc, x| acc + x);
    }
    let Some(v) = nonnegative_solution(&a, &b) else { return Ok(None) };
    let denom = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let y: Vec<BigInt> = v.iter().map(|x| (x + Rational::one()).numer() * (&denom / x.denom())).collect();

    let values = f.edge_values(base);
    let weight = |m: &[BigInt]| m.iter().zip(&values).fold(Rational::zero(), |acc, (c, v)| acc + v * Rational::from_integer(c.clone()));
    let scale = z.iter().zip(&y).map(|(zi, yi)| zi.abs() / yi + BigInt::one()).max().unwrap_or_else(BigInt::one);
    let mut candidates = vec![y.clone()];
    for k in [scale.clone(), scale + BigInt::one()] {
        candidates.push(z.iter().zip(&y).map(|(zi, yi)| zi + &k * yi).collect());
    }
    for m in candidates {
        if weight(&m).is_zero() {
            continue;
        }
        let total: BigInt = m.iter().sum();
        if total > BigInt::from(MAX_WITNESS_LENGTH) {
            continue;
        }
        let mult: Vec<u64> = m.iter().map(|x| x.to_u64().expect("positive multiplicity")).collect();
        let Some(circuit) = graph.euler_circuit(&mult, 0) else { continue };
        if let Some(w) = witness_from_word(system, f, &base.walk_word(&circuit))? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Dispatches on the covering group.
pub fn solve(system: &SkewSystem, f: &RationalCocycle, limits: &Limits) -> Result<SolveOutcome> {
    if system.group().is_finite() {
        solve_finite_gamma(system, f, limits)
    } else {
        solve_free_abelian(system, f, limits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeResidual {
    pub edge: Word,
    /// `f(edge) - (u(head) - u(tail) + alpha(psi(edge_0)))`.
    pub residual: Rational,
}

/// Everything [`verify_solution`] found wrong; empty means certified.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResidualReport {
    pub shape: Vec<String>,
    pub edges: Vec<EdgeResidual>,
    /// Element pairs `(a, b)` with `alpha(ab) != alpha(a) + alpha(b)`.
    pub homomorphism: Vec<(usize, usize)>,
}

impl ResidualReport {
    pub fn certified(&self) -> bool {
        self.shape.is_empty() && self.edges.is_empty() && self.homomorphism.is_empty()
    }
}

/// Re-evaluates the identity on every block-graph edge and re-checks that
/// `alpha` is a homomorphism.
pub fn verify_solution(
    system: &SkewSystem,
    f: &RationalCocycle,
    solution: &CohomologySolution,
    limits: &Limits,
) -> Result<ResidualReport> {
    check_cocycle(system, f)?;
    let mut report = ResidualReport::default();
    let r = solution.block_length;
    if r < f.block_length() {
        report.shape.push(format!("block length {r} is shorter than the cocycle range {}", f.range()));
        return Ok(report);
    }
    let base = build_block_graph(system.sft(), r, limits)?;
    let missing: Vec<&Word> = base.blocks().iter().filter(|b| !solution.u.contains_key(*b)).collect();
    if !missing.is_empty() || solution.u.len() != base.blocks().len() {
        report.shape.push(format!("u must cover exactly the {} admissible {r}-blocks", base.blocks().len()));
        return Ok(report);
    }
    match (system.group(), &solution.alpha) {
        (Group::Finite(g), Alpha::Finite(v)) if v.len() == g.order() => {
            for a in g.generating_set() {
                for b in 0..g.order() {
                    if v[g.mul(a, b)] != &v[a] + &v[b] {
                        report.homomorphism.push((a, b));
                    }
                }
            }
        }
        (Group::FreeAbelian { rank }, Alpha::Linear(a)) if a.len() == *rank => {}
        _ => {
            report.shape.push("alpha does not match the covering group".into());
            return Ok(report);
        }
    }
    let values = f.edge_values(&base);
    for (e, value) in base.edges().iter().zip(values) {
        let alpha = solution.alpha.eval(system.psi(e.word.symbols()[0])).expect("checked shape");
        let rhs = &solution.u[&base.blocks()[e.head]] - &solution.u[&base.blocks()[e.tail]] + alpha;
        let residual = value - rhs;
        if !residual.is_zero() {
            report.edges.push(EdgeResidual { edge: e.word.clone(), residual });
        }
    }
    Ok(report)
}

/// `f(B -> B') = u(B') - u(B) + alpha(psi(B_0))` on the `r`-block graph,
/// where `r` is the block length of `u`. The result has range `r`.
pub fn generate_cocycle(
    system: &SkewSystem,
    block_length: usize,
    u: &BTreeMap<Word, Rational>,
    alpha: &Alpha,
    limits: &Limits,
) -> Result<RationalCocycle> {
    match (system.group(), alpha) {
        (Group::Finite(g), Alpha::Finite(v)) => {
            if v.len() != g.order() {
                return Err(Error::DimensionMismatch { expected: g.order(), found: v.len() });
            }
            if !alpha.is_zero() {
                return Err(Error::TorsionAlpha);
            }
        }
        (Group::Finite(_), Alpha::Linear(a)) => {
            if a.iter().any(|x| !x.is_zero()) {
                return Err(Error::TorsionAlpha);
            }
        }
        (Group::FreeAbelian { rank }, Alpha::Linear(a)) => {
            if a.len() != *rank {
                return Err(Error::DimensionMismatch { expected: *rank, found: a.len() });
            }
        }
        (Group::FreeAbelian { .. }, Alpha::Finite(_)) => return Err(Error::FiniteGroup),
    }
    let alpha = match (system.group(), alpha) {
        (Group::Finite(_), _) => Alpha::zero_for(system.group()),
        _ => alpha.clone(),
    };
    let base = build_block_graph(system.sft(), block_length, limits)?;
    if u.len() != base.blocks().len() {
        return Err(Error::DimensionMismatch { expected: base.blocks().len(), found: u.len() });
    }
    let lookup = |w: &Word| u.get(w).cloned().ok_or_else(|| Error::CocycleMismatch(format!("u is missing block {w}")));
    let mut values = BTreeMap::new();
    for e in base.edges() {
        let s = e.word.symbols();
        let tail = lookup(&Word(s[..block_length].to_vec()))?;
        let head = lookup(&Word(s[1..].to_vec()))?;
        let a = alpha.eval(system.psi(s[0])).expect("checked shape");
        values.insert(e.word.clone(), head - tail + a);
    }
    RationalCocycle::new(system.sft().clone(), block_length, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GroupSpec};
    use crate::sft::SftSpec;
    use crate::skew::ClassTag;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn z1(psi: [i64; 2]) -> SkewSystem {
        let g = Group::build(&GroupSpec::FreeAbelian { rank: 1 }, &Limits::default()).unwrap();
        SkewSystem::new(SftSpec::full_shift(2), g, psi.iter().map(|&x| GroupElement::Vector(vec![x])).collect()).unwrap()
    }

    fn c2(psi: [usize; 2]) -> SkewSystem {
        let g = Group::Finite(FiniteGroup::cyclic(2).unwrap());
        SkewSystem::new(SftSpec::full_shift(2), g, psi.iter().map(|&i| GroupElement::Finite(i)).collect()).unwrap()
    }

    fn cocycle(range: usize, entries: &[(&str, Rational)]) -> RationalCocycle {
        let values = entries.iter().map(|(k, v)| (w(k), v.clone())).collect();
        RationalCocycle::new(SftSpec::full_shift(2), range, values).unwrap()
    }

    fn balanced() -> (SkewSystem, RationalCocycle) {
        let s = z1([1, -1]);
        let u = [(w("1"), q(0, 1)), (w("2"), q(1, 1))].into_iter().collect();
        let f = generate_cocycle(&s, 1, &u, &Alpha::Linear(vec![q(1, 2)]), &Limits::default()).unwrap();
        (s, f)
    }

    #[test]
    fn generated_balanced_cocycle() {
        let (_, f) = balanced();
        let got: Vec<Rational> = ["11", "12", "21", "22"].iter().map(|k| f.values()[&w(k)].clone()).collect();
        assert_eq!(got, [q(1, 2), q(3, 2), q(-3, 2), q(-1, 2)]);
    }

    #[test]
    fn vanishing_examples() {
        let limits = Limits::default();
        let (s, mut f) = balanced();
        assert_eq!(verify_vanishing(&s, &f, 6, &limits).unwrap(), None);
        f.set(&w("22"), Rational::zero()).unwrap();
        let v = verify_vanishing(&s, &f, 4, &limits).unwrap().unwrap();
        assert_eq!((v.orbit.word().clone(), v.repetitions, v.sum), (w("1122"), 1, q(1, 2)));
        let zero = RationalCocycle::zero(SftSpec::full_shift(2), 2).unwrap();
        assert_eq!(verify_vanishing(&c2([0, 1]), &zero, 8, &limits).unwrap(), None);
    }

    #[test]
    fn finite_examples() {
        let limits = Limits::default();
        let s = c2([0, 1]);
        let f = cocycle(1, &[("11", q(0, 1)), ("12", q(1, 1)), ("21", q(-1, 1)), ("22", q(0, 1))]);
        let SolveOutcome::Solved(sol) = solve_finite_gamma(&s, &f, &limits).unwrap() else { panic!() };
        assert_eq!(sol.u.values().cloned().collect::<Vec<_>>(), [q(0, 1), q(1, 1)]);
        assert!(sol.alpha.is_zero());
        assert!(verify_solution(&s, &f, &sol, &limits).unwrap().certified());

        let c = cocycle(0, &[("1", q(3, 1)), ("2", q(3, 1))]);
        let SolveOutcome::Violation(v) = solve_finite_gamma(&s, &c, &limits).unwrap() else { panic!() };
        assert_eq!((v.orbit.word().clone(), v.repetitions, v.sum), (w("1"), 1, q(3, 1)));

        assert!(matches!(solve_finite_gamma(&c2([0, 0]), &f, &limits).unwrap(), SolveOutcome::NotTransitive(_)));
    }

    #[test]
    fn finite_fallback_witness() {
        // With no canonical search the witness comes from the tree loops.
        let limits = Limits { witness_search_period: 0, ..Limits::default() };
        let s = c2([0, 1]);
        let f = cocycle(1, &[("11", q(0, 1)), ("12", q(1, 1)), ("21", q(-1, 1)), ("22", q(5, 1))]);
        let SolveOutcome::Violation(v) = solve_finite_gamma(&s, &f, &limits).unwrap() else { panic!() };
        let word = v.word();
        assert!(s.group().is_identity(&s.return_element(word.symbols())));
        assert_eq!(cyclic_sum(&f, &word).unwrap(), v.sum);
        assert!(!v.sum.is_zero());
    }

    #[test]
    fn free_abelian_examples() {
        let limits = Limits::default();
        let s = z1([0, 1]);
        let f = cocycle(0, &[("1", q(0, 1)), ("2", q(7, 3))]);
        let SolveOutcome::Solved(sol) = solve_free_abelian(&s, &f, &limits).unwrap() else { panic!() };
        assert_eq!(sol.alpha, Alpha::Linear(vec![q(7, 3)]));
        assert!(sol.u.values().all(Zero::is_zero));

        let (s, mut f) = balanced();
        let SolveOutcome::Solved(sol) = solve_free_abelian(&s, &f, &limits).unwrap() else { panic!() };
        assert_eq!(sol.alpha, Alpha::Linear(vec![q(1, 2)]));
        assert_eq!(sol.u.values().cloned().collect::<Vec<_>>(), [q(0, 1), q(1, 1)]);

        f.set(&w("22"), Rational::zero()).unwrap();
        let SolveOutcome::Violation(v) = solve_free_abelian(&s, &f, &limits).unwrap() else { panic!() };
        assert_eq!((v.orbit.word().clone(), v.sum), (w("1122"), q(1, 2)));
    }

    #[test]
    fn free_abelian_circulation_witness() {
        let limits = Limits { witness_search_period: 0, ..Limits::default() };
        let (s, mut f) = balanced();
        f.set(&w("22"), Rational::zero()).unwrap();
        let SolveOutcome::Violation(v) = solve_free_abelian(&s, &f, &limits).unwrap() else { panic!() };
        assert!(s.group().is_identity(&s.return_element(v.word().symbols())));
        assert_eq!(cyclic_sum(&f, &v.word()).unwrap(), v.sum);
        assert!(!v.sum.is_zero());
    }

    #[test]
    fn free_abelian_degenerate() {
        let limits = Limits::default();
        // psi = (1, 1): no cycle is balanced, alpha is pinned but the
        // constant cocycle is consistent.
        let s = z1([0, 0]);
        let f = cocycle(0, &[("1", q(0, 1)), ("2", q(0, 1))]);
        match solve_free_abelian(&s, &f, &limits).unwrap() {
            SolveOutcome::Degenerate(Degenerate::Underdetermined { free_alpha, cycle_lattice, .. }) => {
                assert_eq!(free_alpha, [0]);
                assert!(!cycle_lattice.full);
            }
            other => panic!("{other:?}"),
        }
        // Drifting psi: nothing lifts closed, so an inconsistency has no orbit.
        let s = z1([1, 1]);
        let g = cocycle(1, &[("11", q(1, 1)), ("12", q(0, 1)), ("21", q(0, 1)), ("22", q(0, 1))]);
        let f2 = cocycle(1, &[("11", q(1, 1)), ("12", q(1, 1)), ("21", q(1, 1)), ("22", q(1, 1))]);
        assert!(matches!(solve_free_abelian(&s, &g, &limits).unwrap(), SolveOutcome::Degenerate(Degenerate::Inconsistent { .. })));
        assert!(matches!(solve_free_abelian(&s, &f2, &limits).unwrap(), SolveOutcome::Solved(_)));
    }

    #[test]
    fn residual_reports() {
        let limits = Limits::default();
        let (s, f) = balanced();
        let SolveOutcome::Solved(sol) = solve_free_abelian(&s, &f, &limits).unwrap() else { panic!() };
        let mut bad = sol.clone();
        *bad.u.get_mut(&w("2")).unwrap() += q(1, 1);
        let report = verify_solution(&s, &f, &bad, &limits).unwrap();
        assert_eq!(report.edges.iter().map(|e| e.edge.clone()).collect::<Vec<_>>(), [w("12"), w("21")]);

        let mut bad = sol;
        bad.alpha = Alpha::Linear(vec![q(3, 2)]);
        let report = verify_solution(&s, &f, &bad, &limits).unwrap();
        let res: Vec<Rational> = report.edges.iter().map(|e| e.residual.clone()).collect();
        assert_eq!(res, [q(-1, 1), q(-1, 1), q(1, 1), q(1, 1)]);

        let g = Group::Finite(FiniteGroup::cyclic(3).unwrap());
        let s3 = SkewSystem::new(SftSpec::full_shift(2), g, vec![GroupElement::Finite(0), GroupElement::Finite(1)]).unwrap();
        let zero = RationalCocycle::zero(SftSpec::full_shift(2), 1).unwrap();
        let sol = CohomologySolution {
            block_length: 1,
            u: [(w("1"), q(0, 1)), (w("2"), q(0, 1))].into_iter().collect(),
            alpha: Alpha::Finite(vec![q(0, 1), q(1, 1), q(1, 1)]),
        };
        assert!(!verify_solution(&s3, &zero, &sol, &limits).unwrap().homomorphism.is_empty());
    }

    #[test]
    fn torsion_alpha_rejected() {
        let s = c2([0, 1]);
        let u = [(w("1"), q(0, 1)), (w("2"), q(0, 1))].into_iter().collect();
        assert_eq!(
            generate_cocycle(&s, 1, &u, &Alpha::Finite(vec![q(0, 1), q(1, 1)]), &Limits::default()),
            Err(Error::TorsionAlpha)
        );
        let f = generate_cocycle(&s, 1, &u, &Alpha::zero_for(s.group()), &Limits::default()).unwrap();
        assert!(f.values().values().all(Zero::is_zero));
    }

    #[test]
    fn witness_class_is_trivial() {
        let (s, mut f) = balanced();
        f.set(&w("11"), Rational::zero()).unwrap();
        let v = verify_vanishing(&s, &f, 6, &Limits::default()).unwrap().unwrap();
        let tag = crate::skew::frobenius_class(&s, &v.orbit).unwrap();
        assert!(tag.trivial);
        assert_eq!(tag.class, ClassTag::Vector(vec![0]));
    }
}
