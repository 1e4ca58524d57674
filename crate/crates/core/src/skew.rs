//! The skew product `(x, g) -> (shift x, psi(x_0) g)`: return elements
//! along words, Frobenius classes of periodic orbits, the finite product
//! graph and transitivity verdicts.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::graph::Digraph;
use crate::group::{ConjugacyClass, Group, GroupElement};
use crate::lattice::{subgroup_rank_and_index, LatticeReport};
use crate::linalg::nonnegative_solution;
use crate::sft::{build_block_graph, enumerate_periodic_orbits, validate_sft, BlockGraph, PeriodicOrbit, SftSpec};
use crate::{Error, Limits, Rational, Result, Word};

/// Base shift, covering group and one-symbol cocycle `psi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewSystem {
    sft: SftSpec,
    group: Group,
    psi: Vec<GroupElement>,
}

impl SkewSystem {
    /// Validates the shift (irreducibility included) and that `psi` assigns
    /// an element of `group` to every symbol.
    pub fn new(sft: SftSpec, group: Group, psi: Vec<GroupElement>) -> Result<Self> {
        validate_sft(&sft)?;
        if psi.len() != sft.alphabet_size() {
            return Err(Error::DimensionMismatch { expected: sft.alphabet_size(), found: psi.len() });
        }
        if let Some(bad) = psi.iter().find(|g| !group.contains(g)) {
            return Err(Error::UnknownElement(alloc::format!("{bad:?}")));
        }
        Ok(SkewSystem { sft, group, psi })
    }

    pub fn sft(&self) -> &SftSpec {
        &self.sft
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn psi(&self, symbol: u8) -> &GroupElement {
        &self.psi[symbol as usize]
    }

    pub fn psi_values(&self) -> &[GroupElement] {
        &self.psi
    }

    /// `psi(x_{n-1}) ... psi(x_1) psi(x_0)` with no admissibility check.
    pub(crate) fn return_element(&self, symbols: &[u8]) -> GroupElement {
        symbols.iter().fold(self.group.identity(), |acc, &s| self.group.mul(&self.psi[s as usize], &acc))
    }
}

/// `psi_n` along an admissible word: later symbols multiply on the left.
pub fn psi_n(system: &SkewSystem, word: &Word) -> Result<GroupElement> {
    if !system.sft.is_admissible(word) {
        return Err(Error::InadmissibleWord(word.clone()));
    }
    Ok(system.return_element(word.symbols()))
}

/// Conjugacy class (finite groups) or return vector (`Z^d`) of a periodic orbit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassTag {
    Class(ConjugacyClass),
    Vector(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FrobeniusClassTag {
    pub class: ClassTag,
    pub trivial: bool,
}

pub fn frobenius_class(system: &SkewSystem, orbit: &PeriodicOrbit) -> Result<FrobeniusClassTag> {
    let word = orbit.word();
    if !system.sft.is_cyclically_admissible(word) {
        return Err(Error::InadmissibleWord(word.clone()));
    }
    Ok(class_tag(system, &system.return_element(word.symbols())))
}

pub(crate) fn class_tag(system: &SkewSystem, element: &GroupElement) -> FrobeniusClassTag {
    let trivial = system.group.is_identity(element);
    let class = match (&system.group, element) {
        (Group::Finite(g), GroupElement::Finite(a)) => ClassTag::Class(g.class_of(*a)),
        (_, GroupElement::Vector(v)) => ClassTag::Vector(v.clone()),
        _ => unreachable!("validated system"),
    };
    FrobeniusClassTag { class, trivial }
}

/// Finite presentation of the skew product over the `r`-block graph.
/// Vertex `(block, g)` has index `block * |G| + g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductGraph {
    base: BlockGraph,
    order: usize,
    graph: Digraph,
    /// Base edge of every product edge.
    base_edge: Vec<usize>,
}

impl ProductGraph {
    pub fn base(&self) -> &BlockGraph {
        &self.base
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn digraph(&self) -> &Digraph {
        &self.graph
    }

    pub fn vertex(&self, block: usize, element: usize) -> usize {
        block * self.order + element
    }

    /// `(block, element)` of a vertex index.
    pub fn split(&self, vertex: usize) -> (usize, usize) {
        (vertex / self.order, vertex % self.order)
    }

    pub fn base_edge(&self, edge: usize) -> usize {
        self.base_edge[edge]
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Projection of a closed product walk to its cyclic base word.
    pub fn project_walk(&self, edges: &[usize]) -> Word {
        let base: Vec<usize> = edges.iter().map(|&e| self.base_edge[e]).collect();
        self.base.walk_word(&base)
    }
}

/// Product graph over `BlockGraph(r)`: each base edge `B -> B'` lifts to
/// `(B, g) -> (B', psi(B_0) g)` for every `g`. Edges are listed base-edge
/// major, then by group element.
pub fn build_product_graph(system: &SkewSystem, r: usize, limits: &Limits) -> Result<ProductGraph> {
    let group = system.group.as_finite()?;
    let order = group.order();
    let base = build_block_graph(&system.sft, r, limits)?;
    let states = base.blocks().len() * order;
    if states > limits.max_states {
        return Err(Error::RangeTooLarge { what: "product states", requested: states as u64, cap: limits.max_states as u64 });
    }
    let mut edges = Vec::with_capacity(base.edges().len() * order);
    let mut base_edge = Vec::with_capacity(edges.capacity());
    for (id, e) in base.edges().iter().enumerate() {
        let lift = system.psi[e.word.symbols()[0] as usize].index().unwrap();
        for g in 0..order {
            edges.push((e.tail * order + g, e.head * order + group.mul(lift, g)));
            base_edge.push(id);
        }
    }
    let graph = Digraph::new(states, edges);
    Ok(ProductGraph { base, order, graph, base_edge })
}

/// Why a `Z^d` extension is certainly not transitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonTransitivity {
    /// Product vertex `to` is unreachable from `from` (finite groups);
    /// vertices are `(symbol, element)` pairs, zero-based.
    Unreachable { from: (usize, usize), to: (usize, usize) },
    /// The return vectors of all cycles generate a proper subgroup.
    ProperCycleLattice(LatticeReport),
    /// Every cycle has strictly positive weight under `functional`, so the
    /// fiber coordinate drifts off to infinity.
    Drift { functional: Vec<Rational>, min_cycle_mean: Rational },
}

/// Inconclusive evidence gathered for a `Z^d` extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivityEvidence {
    pub probe_depth: usize,
    pub probed_orbits: usize,
    /// Smith normal form over the probed return vectors.
    pub probed_lattice: LatticeReport,
    /// Whether 0 lies in the interior of the convex hull of the probed
    /// `return vector / period` points.
    pub zero_in_interior: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransitivityVerdict {
    Transitive,
    NotTransitive(NonTransitivity),
    Unknown(TransitivityEvidence),
}

/// Exact for finite groups (strong connectivity of the 1-block product
/// graph). For `Z^d` only non-transitivity can be certified: either the
/// cycle lattice is proper, or a linear functional is strictly positive on
/// every cycle. Otherwise the verdict is `Unknown` with probe evidence.
pub fn check_transitivity(system: &SkewSystem, limits: &Limits) -> Result<TransitivityVerdict> {
    match &system.group {
        Group::Finite(_) => {
            let pg = build_product_graph(system, 1, limits)?;
            Ok(match pg.graph.unreachable_pair() {
                None => TransitivityVerdict::Transitive,
                Some((a, b)) => TransitivityVerdict::NotTransitive(NonTransitivity::Unreachable { from: pg.split(a), to: pg.split(b) }),
            })
        }
        Group::FreeAbelian { rank } => free_abelian_transitivity(system, *rank, limits),
    }
}

fn free_abelian_transitivity(system: &SkewSystem, d: usize, limits: &Limits) -> Result<TransitivityVerdict> {
    let lattice = cycle_lattice(system, d)?;
    if !lattice.full {
        return Ok(TransitivityVerdict::NotTransitive(NonTransitivity::ProperCycleLattice(lattice)));
    }
    // Probe periodic orbits, backing off the depth until the enumeration fits.
    let mut depth = limits.probe_depth.min(limits.max_period);
    let orbits = loop {
        match enumerate_periodic_orbits(&system.sft, depth, limits) {
            Ok(o) => break o,
            Err(Error::RangeTooLarge { .. }) if depth > 1 => depth -= 1,
            Err(e) => return Err(e),
        }
    };
    let mut points: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut vectors = Vec::new();
    // Cycle means of closed walks are convex combinations of simple-cycle
    // means, and simple cycles are no longer than the alphabet.
    let k = system.sft.alphabet_size();
    for o in &orbits {
        let v = system.return_element(o.word().symbols()).vector().unwrap().to_vec();
        if o.period() <= k {
            let p = Rational::from_integer(BigInt::from(o.period()));
            points.insert(v.iter().map(|&x| Rational::from_integer(x.into()) / &p).collect());
        }
        vectors.push(v);
    }
    let points: Vec<Vec<Rational>> = points.into_iter().collect();
    if let Some(functional) = separating_functional(&points, d) {
        let mean = min_cycle_mean(system, &functional);
        if mean.is_positive() {
            return Ok(TransitivityVerdict::NotTransitive(NonTransitivity::Drift { functional, min_cycle_mean: mean }));
        }
    }
    let probed_lattice = subgroup_rank_and_index(&vectors, d)?;
    let zero_in_interior = probed_lattice.rank == d && strictly_positive_relation(&points, d).is_some();
    Ok(TransitivityVerdict::Unknown(TransitivityEvidence {
        probe_depth: depth,
        probed_orbits: orbits.len(),
        probed_lattice,
        zero_in_interior,
    }))
}

/// Smith normal form of the return vectors of the fundamental cycles of the
/// symbol graph; these generate the return vectors of all closed walks.
pub fn cycle_lattice(system: &SkewSystem, d: usize) -> Result<LatticeReport> {
    let graph = system.sft.symbol_graph();
    let vectors = fundamental_cycle_vectors(&graph, |e| {
        let (t, _) = graph.edge(e);
        system.psi[t].vector().unwrap().to_vec()
    });
    subgroup_rank_and_index(&vectors, d)
}

/// Weight of every fundamental cycle of an undirected spanning tree
/// (non-tree edge closed through the tree), for edge weights in `Z^d`.
fn fundamental_cycle_vectors(graph: &Digraph, weight: impl Fn(usize) -> Vec<i64>) -> Vec<Vec<i64>> {
    let n = graph.vertex_count();
    let d = if graph.edge_count() > 0 { weight(0).len() } else { 0 };
    // Potential along an undirected BFS tree from vertex 0.
    let mut pot: Vec<Option<Vec<i64>>> = vec![None; n];
    let mut tree = vec![false; graph.edge_count()];
    pot[0] = Some(vec![0; d]);
    let mut queue = alloc::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let here = pot[v].clone().unwrap();
        for &e in graph.out_edges(v) {
            let (_, h) = graph.edge(e);
            if pot[h].is_none() {
                pot[h] = Some(here.iter().zip(weight(e)).map(|(a, b)| a + b).collect());
                tree[e] = true;
                queue.push_back(h);
            }
        }
        for &e in graph.in_edges(v) {
            let (t, _) = graph.edge(e);
            if pot[t].is_none() {
                pot[t] = Some(here.iter().zip(weight(e)).map(|(a, b)| a - b).collect());
                tree[e] = true;
                queue.push_back(t);
            }
        }
    }
    (0..graph.edge_count())
        .filter(|&e| !tree[e])
        .filter_map(|e| {
            let (t, h) = graph.edge(e);
            let (pt, ph) = (pot[t].as_ref()?, pot[h].as_ref()?);
            Some((0..d).map(|i| pt[i] + weight(e)[i] - ph[i]).collect())
        })
        .collect()
}

/// A functional `l` with `l . p >= 1` for every point, if one exists.
fn separating_functional(points: &[Vec<Rational>], d: usize) -> Option<Vec<Rational>> {
    if points.is_empty() {
        return None;
    }
    // Variables: l+ (d), l- (d), slack (m). Rows: p.(l+ - l-) - s = 1.
    let m = points.len();
    let a: Vec<Vec<Rational>> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut row = Vec::with_capacity(2 * d + m);
            row.extend(p.iter().cloned());
            row.extend(p.iter().map(|x| -x));
            row.extend((0..m).map(|j| if j == i { -Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let b = vec![Rational::one(); m];
    let x = nonnegative_solution(&a, &b)?;
    Some((0..d).map(|i| &x[i] - &x[d + i]).collect())
}

/// Weights `w_i >= 1` with `sum w_i p_i = 0`, if they exist.
pub(crate) fn strictly_positive_relation(points: &[Vec<Rational>], d: usize) -> Option<Vec<Rational>> {
    if points.is_empty() {
        return None;
    }
    // w = 1 + v with v >= 0: sum v_i p_i = -sum p_i.
    let a: Vec<Vec<Rational>> = (0..d).map(|c| points.iter().map(|p| p[c].clone()).collect()).collect();
    let b: Vec<Rational> = (0..d).map(|c| -points.iter().fold(Rational::zero(), |acc, p| acc + &p[c])).collect();
    let v = nonnegative_solution(&a, &b)?;
    Some(v.into_iter().map(|x| x + Rational::one()).collect())
}

/// Minimum mean weight of a cycle in the symbol graph under the edge
/// weight `functional . psi(tail)` (Karp's algorithm, exact).
pub fn min_cycle_mean(system: &SkewSystem, functional: &[Rational]) -> Rational {
    let graph = system.sft.symbol_graph();
    let n = graph.vertex_count();
    let weight: Vec<Rational> = (0..graph.edge_count())
        .map(|e| {
            let v = system.psi[graph.edge(e).0].vector().unwrap();
            v.iter().zip(functional).fold(Rational::zero(), |acc, (&x, l)| acc + l * Rational::from_integer(x.into()))
        })
        .collect();
    // dist[k][v]: minimum weight of a walk with exactly k edges ending at v.
    let mut dist: Vec<Vec<Option<Rational>>> = vec![vec![Some(Rational::zero()); n]];
    for k in 1..=n {
        let mut row: Vec<Option<Rational>> = vec![None; n];
        for e in 0..graph.edge_count() {
            let (t, h) = graph.edge(e);
            if let Some(dt) = &dist[k - 1][t] {
                let cand = dt + &weight[e];
                if row[h].as_ref().map_or(true, |c| cand < *c) {
                    row[h] = Some(cand);
                }
            }
        }
        dist.push(row);
    }
    let mut best: Option<Rational> = None;
    for v in 0..n {
        let Some(dn) = &dist[n][v] else { continue };
        let mut worst: Option<Rational> = None;
        for k in 0..n {
            if let Some(dk) = &dist[k][v] {
                let mean = (dn - dk) / Rational::from_integer(BigInt::from(n - k));
                if worst.as_ref().map_or(true, |w| mean > *w) {
                    worst = Some(mean);
                }
            }
        }
        if let Some(w) = worst {
            if best.as_ref().map_or(true, |b| w < *b) {
                best = Some(w);
            }
        }
    }
    best.unwrap_or_else(Rational::zero)
}

/// Primitive orbits of period at most `max_period` whose return element is
/// the identity, in canonical order.
pub fn enumerate_trivial_class_orbits(
    system: &SkewSystem,
    max_period: usize,
    limits: &Limits,
) -> Result<Vec<(PeriodicOrbit, FrobeniusClassTag)>> {
    if max_period == 0 {
        return Ok(Vec::new());
    }
    let orbits = enumerate_periodic_orbits(&system.sft, max_period, limits)?;
    Ok(orbits
        .into_iter()
        .filter_map(|o| {
            let g = system.return_element(o.word().symbols());
            system.group.is_identity(&g).then(|| {
                let tag = class_tag(system, &g);
                (o, tag)
            })
        })
        .collect())
}

/// Smallest `m >= 1` with `g^m = e`, or `None` for a non-identity `Z^d` element.
pub(crate) fn lift_order(group: &Group, g: &GroupElement) -> Option<usize> {
    match (group, g) {
        (Group::Finite(fg), GroupElement::Finite(a)) => Some(fg.element_order(*a)),
        (Group::FreeAbelian { .. }, GroupElement::Vector(v)) => v.iter().all(|&x| x == 0).then_some(1),
        _ => None,
    }
}

/// Every primitive orbit `o` together with the least repetition count `m`
/// such that `o^m` lifts closed, restricted to `m * period <= max_period`.
/// Sorted by total period, then word.
pub fn closed_lifts(system: &SkewSystem, max_period: usize, limits: &Limits) -> Result<Vec<(PeriodicOrbit, usize)>> {
    let orbits = enumerate_periodic_orbits(&system.sft, max_period, limits)?;
    let mut out: Vec<(PeriodicOrbit, usize)> = orbits
        .into_iter()
        .filter_map(|o| {
            let g = system.return_element(o.word().symbols());
            let m = lift_order(&system.group, &g)?;
            (m * o.period() <= max_period).then_some((o, m))
        })
        .collect();
    out.sort_by(|a, b| (a.1 * a.0.period(), a.0.word()).cmp(&(b.1 * b.0.period(), b.0.word())));
    Ok(out)
}

/// Checks `Z^d` extension symbols agree in dimension; a small helper for
/// callers that build systems by hand.
pub fn rank_of(system: &SkewSystem) -> Option<usize> {
    match system.group {
        Group::FreeAbelian { rank } => Some(rank),
        Group::Finite(_) => None,
    }
}
