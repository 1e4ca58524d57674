//! Matrix-valued cocycles over finite group extensions: solving
//! `f(x) = alpha(psi(x)) u(shift x) u(x)^-1`, and the distortion rates of
//! the adjoint action.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cocycle::{cyclic_product, LocallyConstantCocycle};
use crate::group::Group;
use crate::matrix::Mat;
use crate::sft::{admissible_words, build_block_graph, enumerate_periodic_orbits, PeriodicOrbit};
use crate::skew::{build_product_graph, closed_lifts, NonTransitivity, SkewSystem};
use crate::{Error, Limits, Result, Word};

/// Default tolerance for certifying matrix solutions.
pub const SOLUTION_TOL: f64 = 1e-9;
/// Default tolerance for distortion estimates.
pub const DISTORTION_TOL: f64 = 1e-6;
/// Pivots below this (relative) make a matrix singular.
const SINGULAR_TOL: f64 = 1e-12;

/// A locally constant cocycle into invertible `d x d` matrices, with an
/// optional basis of the Lie algebra used by the adjoint action.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCocycle {
    values: LocallyConstantCocycle<Mat>,
    algebra: Option<Vec<Mat>>,
    inverses: BTreeMap<Word, Mat>,
}

impl MatrixCocycle {
    /// Checks that every value is an invertible matrix of one dimension and
    /// that the declared algebra is linearly independent and closed under
    /// brackets within `tol`.
    pub fn new(values: LocallyConstantCocycle<Mat>, algebra: Option<Vec<Mat>>, tol: f64) -> Result<Self> {
        let dim = values.values().values().next().map_or(0, Mat::dim);
        let mut inverses = BTreeMap::new();
        for (w, m) in values.values() {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
            let inv = m.inverse(SINGULAR_TOL).ok_or_else(|| Error::SingularMatrix(format!("f({w})")))?;
            inverses.insert(w.clone(), inv);
        }
        if let Some(basis) = &algebra {
            check_algebra(basis, dim, tol)?;
        }
        Ok(MatrixCocycle { values, algebra, inverses })
    }

    pub fn values(&self) -> &LocallyConstantCocycle<Mat> {
        &self.values
    }

    pub fn algebra(&self) -> Option<&[Mat]> {
        self.algebra.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.values.values().values().next().map_or(0, Mat::dim)
    }

    pub fn block_length(&self) -> usize {
        self.values.block_length()
    }

    fn inverse_of(&self, window: &Word) -> &Mat {
        &self.inverses[window]
    }
}

fn check_algebra(basis: &[Mat], dim: usize, tol: f64) -> Result<()> {
    if basis.is_empty() {
        return Err(Error::BadShape("declared algebra has no basis elements".into()));
    }
    if let Some(x) = basis.iter().find(|x| x.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: x.dim() });
    }
    let proj = Projector::new(basis)?;
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let bracket = basis[i].commutator(&basis[j]);
            let coords = proj.coordinates(&bracket);
            let back = proj.combine(&coords);
            let residual = bracket.sub(&back).frobenius_norm();
            if residual > tol * bracket.frobenius_norm().max(1.0) {
                return Err(Error::AlgebraNotClosed { i, j, residual });
            }
        }
    }
    Ok(())
}

/// Least-squares coordinates with respect to a basis of matrices, using
/// the Frobenius inner product.
struct Projector<'a> {
    basis: &'a [Mat],
    gram_inverse: Mat,
}

impl<'a> Projector<'a> {
    fn new(basis: &'a [Mat]) -> Result<Self> {
        let m = basis.len();
        let mut gram = Mat::zeros(m);
        for i in 0..m {
            for j in 0..m {
                gram.set(i, j, inner(&basis[i], &basis[j]));
            }
        }
        let gram_inverse = gram.inverse(1e-10).ok_or_else(|| Error::BadShape("declared algebra basis is linearly dependent".into()))?;
        Ok(Projector { basis, gram_inverse })
    }

    fn coordinates(&self, y: &Mat) -> Vec<f64> {
        let m = self.basis.len();
        let rhs: Vec<f64> = self.basis.iter().map(|x| inner(x, y)).collect();
        (0..m).map(|i| (0..m).map(|j| self.gram_inverse.get(i, j) * rhs[j]).sum()).collect()
    }

    fn combine(&self, coords: &[f64]) -> Mat {
        let d = self.basis[0].dim();
        self.basis.iter().zip(coords).fold(Mat::zeros(d), |acc, (x, &c)| acc.add(&x.scale(c)))
    }
}

fn inner(a: &Mat, b: &Mat) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum()
}

/// A closed lift whose ordered product is not the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixWitness {
    pub orbit: PeriodicOrbit,
    pub repetitions: usize,
    /// Ordered product over `orbit` repeated, starting at its least rotation.
    pub product: Mat,
    /// Frobenius distance from `product` to the identity.
    pub distance: f64,
}

impl MatrixWitness {
    pub fn word(&self) -> Word {
        self.orbit.word().repeat(self.repetitions)
    }

    pub fn period(&self) -> usize {
        self.orbit.period() * self.repetitions
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSolution {
    pub block_length: usize,
    pub u: BTreeMap<Word, Mat>,
    /// `alpha` on every group element, in element order.
    pub alpha: Vec<Mat>,
    pub residuals: MatrixResiduals,
    pub tolerance: f64,
}

/// Largest violation of each identity a matrix solution must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MatrixResiduals {
    pub reconstruction: f64,
    pub homomorphism: f64,
    pub centrality: f64,
}

impl MatrixResiduals {
    pub fn within(&self, tol: f64) -> bool {
        self.reconstruction <= tol && self.homomorphism <= tol && self.centrality <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixOutcome {
    Solved(MatrixSolution),
    Violation(MatrixWitness),
    NotTransitive(NonTransitivity),
    /// Every checked closed lift is trivial, but the fiber shift is not a
    /// single central homomorphism. `spread` is the largest disagreement
    /// between candidate values of `alpha`.
    NoCentralShift { spread: f64, residuals: MatrixResiduals },
}

/// Ordered product of the windows of a cyclic word, starting at position 0.
fn closed_product(f: &MatrixCocycle, word: &Word) -> Result<Mat> {
    cyclic_product(&f.values, word)
}

fn matrix_witness(f: &MatrixCocycle, word: &Word, tol: f64, sft: &crate::sft::SftSpec) -> Result<Option<MatrixWitness>> {
    let p = word.primitive_period();
    let orbit = PeriodicOrbit::new(sft, Word(word.symbols()[..p].to_vec()))?;
    let repetitions = word.len() / p;
    let product = closed_product(f, &orbit.word().repeat(repetitions))?;
    let distance = product.distance_to_identity();
    Ok((distance > tol).then_some(MatrixWitness { orbit, repetitions, product, distance }))
}

/// First closed lift (by period, then word) whose product differs from the
/// identity by more than `tol`.
pub fn verify_matrix_vanishing(
    system: &SkewSystem,
    f: &MatrixCocycle,
    max_period: usize,
    tol: f64,
    limits: &Limits,
) -> Result<Option<MatrixWitness>> {
    check_matrix_cocycle(system, f)?;
    if max_period == 0 {
        return Ok(None);
    }
    for (orbit, m) in closed_lifts(system, max_period, limits)? {
        let product = closed_product(f, &orbit.word().repeat(m))?;
        let distance = product.distance_to_identity();
        if distance > tol {
            return Ok(Some(MatrixWitness { orbit, repetitions: m, product, distance }));
        }
    }
    Ok(None)
}

fn check_matrix_cocycle(system: &SkewSystem, f: &MatrixCocycle) -> Result<()> {
    if f.values.sft() != system.sft() {
        return Err(Error::CocycleMismatch("cocycle and system have different shifts".into()));
    }
    Ok(())
}

/// Spanning-tree propagation `u_hat(head) = f(edge) u_hat(tail)` on the
/// product graph from `u_hat(root) = I`; then
/// `alpha(g) = u_hat(B, g h) u_hat(B, h)^-1` and `u(B) = u_hat(B, e)`.
pub fn solve_matrix_finite(system: &SkewSystem, f: &MatrixCocycle, tol: f64, limits: &Limits) -> Result<MatrixOutcome> {
    check_matrix_cocycle(system, f)?;
    let group = system.group().as_finite()?;
    let r = f.block_length();
    let pg = build_product_graph(system, r, limits)?;
    let graph = pg.digraph();
    if let Some((a, b)) = graph.unreachable_pair() {
        return Ok(MatrixOutcome::NotTransitive(NonTransitivity::Unreachable { from: pg.split(a), to: pg.split(b) }));
    }
    let base = pg.base();
    let values = f.values.edge_values(base);
    let value = |e: usize| &values[pg.base_edge(e)];
    let dim = f.dim();

    let (parent, order) = graph.bfs_tree(0);
    let mut pot: Vec<Mat> = vec![Mat::identity(dim); graph.vertex_count()];
    for &v in order.iter().skip(1) {
        let e = parent[v].expect("reachable vertex has a tree edge");
        pot[v] = value(e).mul(&pot[graph.edge(e).0]);
    }
    let mut inv: Vec<Mat> = Vec::with_capacity(pot.len());
    for (v, p) in pot.iter().enumerate() {
        let (b, g) = pg.split(v);
        inv.push(p.inverse(SINGULAR_TOL).ok_or_else(|| Error::SingularMatrix(format!("u_hat({}, {})", base.blocks()[b], group.name(g))))?);
    }

    let mut searched = false;
    for e in 0..graph.edge_count() {
        let (t, h) = graph.edge(e);
        let residual = value(e).sub(&pot[h].mul(&inv[t])).frobenius_norm();
        if residual <= tol {
            continue;
        }
        if !searched {
            searched = true;
            let depth = limits.witness_search_period.min(limits.max_period);
            match verify_matrix_vanishing(system, f, depth, tol, limits) {
                Ok(Some(w)) => return Ok(MatrixOutcome::Violation(w)),
                Ok(None) | Err(Error::RangeTooLarge { .. }) => {}
                Err(err) => return Err(err),
            }
        }
        let back = graph.shortest_path(h, 0).expect("strongly connected");
        let mut through = tree_path(graph, &parent, t);
        through.push(e);
        through.extend(&back);
        let mut direct = tree_path(graph, &parent, h);
        direct.extend(&back);
        for walk in [through, direct] {
            if walk.is_empty() {
                continue;
            }
            if let Some(w) = matrix_witness(f, &pg.project_walk(&walk), tol, system.sft())? {
                return Ok(MatrixOutcome::Violation(w));
            }
        }
    }

    // alpha(g) from the first block and the identity fiber, then its spread.
    let id = group.identity();
    let alpha: Vec<Mat> = (0..group.order()).map(|g| pot[pg.vertex(0, g)].mul(&inv[pg.vertex(0, id)])).collect();
    let mut spread: f64 = 0.0;
    for b in 0..base.blocks().len() {
        for h in 0..group.order() {
            for g in 0..group.order() {
                let cand = pot[pg.vertex(b, group.mul(g, h))].mul(&inv[pg.vertex(b, h)]);
                spread = spread.max(cand.sub(&alpha[g]).frobenius_norm());
            }
        }
    }
    let u: BTreeMap<Word, Mat> = base.blocks().iter().enumerate().map(|(b, w)| (w.clone(), pot[pg.vertex(b, id)].clone())).collect();
    let solution = MatrixSolution { block_length: r, u, alpha, residuals: MatrixResiduals::default(), tolerance: tol };
    let report = verify_matrix_solution(system, f, &solution, tol, limits)?;
    if spread > tol || !report.certified() {
        return Ok(MatrixOutcome::NoCentralShift { spread, residuals: report.residuals });
    }
    Ok(MatrixOutcome::Solved(MatrixSolution { residuals: report.residuals, ..solution }))
}

fn tree_path(graph: &crate::graph::Digraph, parent: &[Option<usize>], mut v: usize) -> Vec<usize> {
    let mut path = Vec::new();
    while let Some(e) = parent[v] {
        path.push(e);
        v = graph.edge(e).0;
    }
    path.reverse();
    path
}

/// Everything [`verify_matrix_solution`] found above tolerance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatrixResidualReport {
    pub shape: Vec<String>,
    /// Edges with `|f(e) - alpha(psi) u(B') u(B)^-1| > tol`.
    pub edges: Vec<(Word, f64)>,
    /// Pairs `(a, b)` with `|alpha(ab) - alpha(a) alpha(b)| > tol`.
    pub homomorphism: Vec<(usize, usize, f64)>,
    /// `(g, w)` with `|alpha(g) f(w) - f(w) alpha(g)| > tol`.
    pub centrality: Vec<(usize, Word, f64)>,
    pub residuals: MatrixResiduals,
}

impl MatrixResidualReport {
    pub fn certified(&self) -> bool {
        self.shape.is_empty() && self.edges.is_empty() && self.homomorphism.is_empty() && self.centrality.is_empty()
    }
}

/// Re-checks reconstruction on every edge, the homomorphism property on
/// all pairs, and that `alpha` commutes with every value of `f`.
pub fn verify_matrix_solution(
    system: &SkewSystem,
    f: &MatrixCocycle,
    solution: &MatrixSolution,
    tol: f64,
    limits: &Limits,
) -> Result<MatrixResidualReport> {
    check_matrix_cocycle(system, f)?;
    let group = system.group().as_finite()?;
    let mut report = MatrixResidualReport::default();
    let r = solution.block_length;
    if r < f.block_length() {
        report.shape.push(format!("block length {r} is shorter than the cocycle range {}", f.values.range()));
        return Ok(report);
    }
    let base = build_block_graph(system.sft(), r, limits)?;
    let dim = f.dim();
    if solution.alpha.len() != group.order() {
        report.shape.push(format!("alpha must have {} values", group.order()));
    }
    if solution.u.len() != base.blocks().len() || base.blocks().iter().any(|b| !solution.u.contains_key(b)) {
        report.shape.push(format!("u must cover exactly the {} admissible {r}-blocks", base.blocks().len()));
    }
    if solution.u.values().chain(&solution.alpha).any(|m| m.dim() != dim) {
        report.shape.push(format!("every matrix must be {dim} x {dim}"));
    }
    if !report.shape.is_empty() {
        return Ok(report);
    }
    let mut u_inv = BTreeMap::new();
    for (w, m) in &solution.u {
        match m.inverse(SINGULAR_TOL) {
            Some(i) => {
                u_inv.insert(w, i);
            }
            None => report.shape.push(format!("u({w}) is singular")),
        }
    }
    if !report.shape.is_empty() {
        return Ok(report);
    }
    let values = f.values.edge_values(&base);
    for (e, fv) in base.edges().iter().zip(&values) {
        let g = system.psi(e.word.symbols()[0]).index().expect("finite group");
        let tail = &base.blocks()[e.tail];
        let head = &base.blocks()[e.head];
        let rebuilt = solution.alpha[g].mul(&solution.u[head]).mul(&u_inv[tail]);
        let res = fv.sub(&rebuilt).frobenius_norm();
        report.residuals.reconstruction = report.residuals.reconstruction.max(res);
        if res > tol {
            report.edges.push((e.word.clone(), res));
        }
    }
    for a in 0..group.order() {
        for b in 0..group.order() {
            let res = solution.alpha[group.mul(a, b)].sub(&solution.alpha[a].mul(&solution.alpha[b])).frobenius_norm();
            report.residuals.homomorphism = report.residuals.homomorphism.max(res);
            if res > tol {
                report.homomorphism.push((a, b, res));
            }
        }
    }
    for g in 0..group.order() {
        for (w, fv) in f.values.values() {
            let res = solution.alpha[g].commutator(fv).frobenius_norm();
            report.residuals.centrality = report.residuals.centrality.max(res);
            if res > tol {
                report.centrality.push((g, w.clone(), res));
            }
        }
    }
    Ok(report)
}

/// `f(B -> B') = alpha(psi(B_0)) u(B') u(B)^-1` on the `r`-block graph,
/// where `r` is the block length of `u`. `alpha` must be a homomorphism
/// whose values commute with each other and with every resulting value of
/// `f`.
pub fn generate_matrix_cocycle(
    system: &SkewSystem,
    block_length: usize,
    u: &BTreeMap<Word, Mat>,
    alpha: &[Mat],
    tol: f64,
    limits: &Limits,
) -> Result<MatrixCocycle> {
    let group = system.group().as_finite()?;
    if alpha.len() != group.order() {
        return Err(Error::DimensionMismatch { expected: group.order(), found: alpha.len() });
    }
    for a in group.generating_set() {
        for b in 0..group.order() {
            let res = alpha[group.mul(a, b)].sub(&alpha[a].mul(&alpha[b])).frobenius_norm();
            if res > tol {
                return Err(Error::NotAHomomorphism(format!(
                    "alpha({}{}) differs from alpha({}) alpha({}) by {res:e}",
                    group.name(a),
                    group.name(b),
                    group.name(a),
                    group.name(b)
                )));
            }
            let res = alpha[a].commutator(&alpha[b]).frobenius_norm();
            if res > tol {
                return Err(Error::CentralityImpossible(format!(
                    "alpha({}) and alpha({}) do not commute ({res:e})",
                    group.name(a),
                    group.name(b)
                )));
            }
        }
    }
    let base = build_block_graph(system.sft(), block_length, limits)?;
    if u.len() != base.blocks().len() {
        return Err(Error::DimensionMismatch { expected: base.blocks().len(), found: u.len() });
    }
    let mut inverses = BTreeMap::new();
    for (w, m) in u {
        inverses.insert(w, m.inverse(SINGULAR_TOL).ok_or_else(|| Error::SingularMatrix(format!("u({w})")))?);
    }
    let mut values = BTreeMap::new();
    for e in base.edges() {
        let s = e.word.symbols();
        let tail = Word(s[..block_length].to_vec());
        let head = Word(s[1..].to_vec());
        let (Some(uh), Some(ut)) = (u.get(&head), inverses.get(&tail)) else {
            return Err(Error::CocycleMismatch(format!("u is missing a block of {}", e.word)));
        };
        let g = system.psi(s[0]).index().expect("finite group");
        values.insert(e.word.clone(), alpha[g].mul(uh).mul(ut));
    }
    for g in group.generating_set() {
        for (w, fv) in &values {
            let res = alpha[g].commutator(fv).frobenius_norm();
            if res > tol {
                return Err(Error::CentralityImpossible(format!("alpha({}) does not commute with f({w}) ({res:e})", group.name(g))));
            }
        }
    }
    let cocycle = LocallyConstantCocycle::new(system.sft().clone(), block_length, values)?;
    MatrixCocycle::new(cocycle, None, tol)
}

/// Which space the adjoint action is measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdMode {
    /// The declared Lie algebra basis.
    Declared,
    /// All `d x d` matrices.
    Ambient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    pub depth: usize,
    pub mode: AdMode,
    /// `max |Ad(f_n)|^(1/n)` over admissible words, for `n = 1..=depth`.
    pub mu_s_sequence: Vec<f64>,
    /// The same for `Ad(f_n)^-1`.
    pub mu_u_sequence: Vec<f64>,
    /// Largest `rho(Ad(f_n))^(1/n)` over periodic orbits of period at most
    /// `depth`. This is a lower bound for the limit and the reported value.
    pub mu_s: f64,
    pub mu_u: f64,
    /// Smallest term of each norm sequence: an upper bound for the limit.
    pub mu_s_upper: f64,
    pub mu_u_upper: f64,
    /// `max(|log mu_s|, |log mu_u|) / log 2`.
    pub threshold: f64,
}

/// Matrix of `X -> g X g^-1` in the chosen basis.
fn adjoint(g: &Mat, g_inv: &Mat, projector: Option<&Projector>) -> Mat {
    match projector {
        Some(p) => {
            let m = p.basis.len();
            let mut ad = Mat::zeros(m);
            for (j, x) in p.basis.iter().enumerate() {
                let c = p.coordinates(&g.mul(x).mul(g_inv));
                for (i, v) in c.into_iter().enumerate() {
                    ad.set(i, j, v);
                }
            }
            ad
        }
        None => {
            let d = g.dim();
            let mut ad = Mat::zeros(d * d);
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        for e in 0..d {
                            ad.set(a * d + b, c * d + e, g.get(a, c) * g_inv.get(e, b));
                        }
                    }
                }
            }
            ad
        }
    }
}

/// Norm sequences over every admissible word up to `depth`, and the
/// spectral lower bound over periodic orbits up to `depth`.
pub fn estimate_distortion(f: &MatrixCocycle, depth: usize, mode: AdMode, limits: &Limits) -> Result<DistortionReport> {
    if depth == 0 {
        return Err(Error::BadShape("distortion depth must be at least 1".into()));
    }
    if depth > limits.max_period {
        return Err(Error::RangeTooLarge { what: "distortion depth", requested: depth as u64, cap: limits.max_period as u64 });
    }
    let projector = match mode {
        AdMode::Declared => {
            let basis = f.algebra().ok_or_else(|| Error::BadShape("no declared algebra; use ambient mode".into()))?;
            Some(Projector::new(basis)?)
        }
        AdMode::Ambient => None,
    };
    let sft = f.values.sft();
    let range = f.values.range();
    let total: u64 = (1..=depth)
        .map(|n| crate::sft::count_admissible_words(sft, n + range))
        .fold(0u64, u64::saturating_add);
    if total > limits.max_orbits {
        return Err(Error::RangeTooLarge { what: "distortion words", requested: total, cap: limits.max_orbits });
    }

    let dim = f.dim();
    let mut best_s = vec![0.0f64; depth];
    let mut best_u = vec![0.0f64; depth];
    // Depth-first over admissible words, carrying f_n and its inverse.
    let starts = admissible_words(sft, range + 1, usize::MAX)?;
    let mut stack: Vec<(Vec<u8>, Mat, Mat)> = starts.into_iter().rev().map(|w| (w.0, Mat::identity(dim), Mat::identity(dim))).collect();
    while let Some((word, prod, prod_inv)) = stack.pop() {
        let window = Word(word[word.len() - range - 1..].to_vec());
        let prod = f.values.values()[&window].mul(&prod);
        let prod_inv = prod_inv.mul(f.inverse_of(&window));
        let n = word.len() - range;
        best_s[n - 1] = best_s[n - 1].max(adjoint(&prod, &prod_inv, projector.as_ref()).spectral_norm());
        best_u[n - 1] = best_u[n - 1].max(adjoint(&prod_inv, &prod, projector.as_ref()).spectral_norm());
        if n < depth {
            let last = *word.last().unwrap();
            for s in (0..sft.alphabet_size() as u8).rev() {
                if sft.allows(last, s) {
                    let mut next = word.clone();
                    next.push(s);
                    stack.push((next, prod.clone(), prod_inv.clone()));
                }
            }
        }
    }
    let root = |v: f64, n: usize| libm::pow(v, 1.0 / n as f64);
    let mu_s_sequence: Vec<f64> = best_s.iter().enumerate().map(|(i, &v)| root(v, i + 1)).collect();
    let mu_u_sequence: Vec<f64> = best_u.iter().enumerate().map(|(i, &v)| root(v, i + 1)).collect();

    let mut mu_s: f64 = 0.0;
    let mut mu_u: f64 = 0.0;
    for orbit in enumerate_periodic_orbits(sft, depth, limits)? {
        let p = closed_product(f, orbit.word())?;
        let p_inv = p.inverse(SINGULAR_TOL).ok_or_else(|| Error::SingularMatrix(format!("f_n over {orbit}")))?;
        let n = orbit.period();
        mu_s = mu_s.max(root(adjoint(&p, &p_inv, projector.as_ref()).spectral_radius(), n));
        mu_u = mu_u.max(root(adjoint(&p_inv, &p, projector.as_ref()).spectral_radius(), n));
    }
    let mu_s_upper = mu_s_sequence.iter().copied().fold(f64::INFINITY, f64::min);
    let mu_u_upper = mu_u_sequence.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = libm::fmax(libm::fabs(libm::log(mu_s)), libm::fabs(libm::log(mu_u))) / core::f64::consts::LN_2;
    Ok(DistortionReport { depth, mode, mu_s_sequence, mu_u_sequence, mu_s, mu_u, mu_s_upper, mu_u_upper, threshold })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistortionVerdict {
    Satisfied,
    Violated,
    Marginal,
}

/// `theta` must exceed the threshold by more than `tol`. A gap that is zero
/// up to rounding counts as a violation, since the inequality is strict;
/// anything in between is marginal.
pub fn check_distortion_assumption(report: &DistortionReport, theta: f64, tol: f64) -> DistortionVerdict {
    let gap = theta - report.threshold;
    let rounding = 1e-9 * report.threshold.max(1.0);
    if gap > tol {
        DistortionVerdict::Satisfied
    } else if gap <= rounding {
        DistortionVerdict::Violated
    } else {
        DistortionVerdict::Marginal
    }
}

/// The Lie algebra of `SO(2)`.
pub fn so2_algebra() -> Vec<Mat> {
    vec![Mat::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]])]
}

/// `sl(2)` with basis `H, E, F`.
pub fn sl2_algebra() -> Vec<Mat> {
    vec![
        Mat::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]),
        Mat::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]),
        Mat::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]),
    ]
}

/// Strictly upper triangular `3 x 3` matrices.
pub fn heisenberg_algebra() -> Vec<Mat> {
    [(0, 1), (1, 2), (0, 2)]
        .iter()
        .map(|&(i, j)| {
            let mut m = Mat::zeros(3);
            m.set(i, j, 1.0);
            m
        })
        .collect()
}

/// Whether the group is one the matrix solver accepts.
pub fn supports(group: &Group) -> bool {
    group.is_finite()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GroupElement};
    use crate::sft::SftSpec;
    use core::f64::consts::PI;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn c2() -> SkewSystem {
        let g = Group::Finite(FiniteGroup::cyclic(2).unwrap());
        SkewSystem::new(SftSpec::full_shift(2), g, vec![GroupElement::Finite(0), GroupElement::Finite(1)]).unwrap()
    }

    fn one_symbol(a: Mat, b: Mat, algebra: Option<Vec<Mat>>) -> MatrixCocycle {
        let values = [(w("1"), a), (w("2"), b)].into_iter().collect();
        MatrixCocycle::new(LocallyConstantCocycle::new(SftSpec::full_shift(2), 0, values).unwrap(), algebra, 1e-9).unwrap()
    }

    fn close(a: &Mat, b: &Mat, tol: f64) -> bool {
        a.sub(b).max_abs() <= tol
    }

    #[test]
    fn rotation_by_pi() {
        let limits = Limits::default();
        let f = one_symbol(Mat::identity(2), Mat::rotation2(PI), None);
        let MatrixOutcome::Solved(sol) = solve_matrix_finite(&c2(), &f, SOLUTION_TOL, &limits).unwrap() else { panic!() };
        assert!(sol.u.values().all(|m| close(m, &Mat::identity(2), 1e-12)));
        assert!(close(&sol.alpha[1], &Mat::rotation2(PI), 1e-12));
        assert!(sol.residuals.reconstruction < 1e-12);
        assert!(verify_matrix_solution(&c2(), &f, &sol, SOLUTION_TOL, &limits).unwrap().certified());
    }

    #[test]
    fn quarter_turn_violates() {
        let f = one_symbol(Mat::identity(2), Mat::rotation2(PI / 2.0), None);
        let MatrixOutcome::Violation(v) = solve_matrix_finite(&c2(), &f, SOLUTION_TOL, &Limits::default()).unwrap() else { panic!() };
        assert_eq!((v.orbit.word().clone(), v.repetitions), (w("2"), 2));
        assert!(close(&v.product, &Mat::rotation2(PI), 1e-12));
    }

    #[test]
    fn identity_cocycle() {
        let f = one_symbol(Mat::identity(2), Mat::identity(2), None);
        let MatrixOutcome::Solved(sol) = solve_matrix_finite(&c2(), &f, SOLUTION_TOL, &Limits::default()).unwrap() else { panic!() };
        assert!(sol.alpha.iter().chain(sol.u.values()).all(|m| close(m, &Mat::identity(2), 0.0)));
    }

    #[test]
    fn not_transitive() {
        let g = Group::Finite(FiniteGroup::cyclic(2).unwrap());
        let s = SkewSystem::new(SftSpec::full_shift(2), g, vec![GroupElement::Finite(0), GroupElement::Finite(0)]).unwrap();
        let f = one_symbol(Mat::identity(2), Mat::identity(2), None);
        assert!(matches!(solve_matrix_finite(&s, &f, SOLUTION_TOL, &Limits::default()).unwrap(), MatrixOutcome::NotTransitive(_)));
    }

    #[test]
    fn perturbed_u_and_noncentral_alpha() {
        let limits = Limits::default();
        let s = c2();
        let u: BTreeMap<Word, Mat> = [(w("1"), Mat::rotation2(0.3)), (w("2"), Mat::rotation2(-1.1))].into_iter().collect();
        let f = generate_matrix_cocycle(&s, 1, &u, &[Mat::identity(2), Mat::rotation2(PI)], SOLUTION_TOL, &limits).unwrap();
        let sol = MatrixSolution { block_length: 1, u: u.clone(), alpha: vec![Mat::identity(2), Mat::rotation2(PI)], residuals: Default::default(), tolerance: SOLUTION_TOL };
        assert!(verify_matrix_solution(&s, &f, &sol, SOLUTION_TOL, &limits).unwrap().certified());
        let mut bad = sol.clone();
        let moved = Mat::rotation2(PI / 3.0).mul(&bad.u[&w("2")]);
        bad.u.insert(w("2"), moved);
        let report = verify_matrix_solution(&s, &f, &bad, SOLUTION_TOL, &limits).unwrap();
        let edges: Vec<Word> = report.edges.iter().map(|(e, _)| e.clone()).collect();
        assert_eq!(edges, [w("12"), w("21")]);

        // Two rotations about different axes: alpha(g) = R_pi about z is
        // not central.
        let a = Mat::rotation3([1.0, 0.0, 0.0], 0.7);
        let b = Mat::rotation3([0.0, 1.0, 0.0], 0.4);
        let f3 = one_symbol(a, b, None);
        let rz = Mat::rotation3([0.0, 0.0, 1.0], PI);
        let sol = MatrixSolution {
            block_length: 1,
            u: [(w("1"), Mat::identity(3)), (w("2"), Mat::identity(3))].into_iter().collect(),
            alpha: vec![Mat::identity(3), rz],
            residuals: Default::default(),
            tolerance: SOLUTION_TOL,
        };
        let report = verify_matrix_solution(&s, &f3, &sol, SOLUTION_TOL, &limits).unwrap();
        assert!(!report.centrality.is_empty());
    }

    #[test]
    fn generator_rejections() {
        let limits = Limits::default();
        let s = c2();
        let u: BTreeMap<Word, Mat> = [(w("1"), Mat::identity(2)), (w("2"), Mat::identity(2))].into_iter().collect();
        let f = generate_matrix_cocycle(&s, 1, &u, &[Mat::identity(2), Mat::rotation2(PI)], SOLUTION_TOL, &limits).unwrap();
        assert!(close(&f.values().values()[&w("11")], &Mat::identity(2), 0.0));
        assert!(close(&f.values().values()[&w("21")], &Mat::rotation2(PI), 1e-15));
        assert!(matches!(
            generate_matrix_cocycle(&s, 1, &u, &[Mat::identity(2), Mat::rotation2(1.0)], SOLUTION_TOL, &limits),
            Err(Error::NotAHomomorphism(_))
        ));
        let u3: BTreeMap<Word, Mat> =
            [(w("1"), Mat::identity(3)), (w("2"), Mat::rotation3([1.0, 0.0, 0.0], 0.5))].into_iter().collect();
        let rz = Mat::rotation3([0.0, 0.0, 1.0], PI);
        assert!(matches!(
            generate_matrix_cocycle(&s, 1, &u3, &[Mat::identity(3), rz], SOLUTION_TOL, &limits),
            Err(Error::CentralityImpossible(_))
        ));
    }

    #[test]
    fn algebra_must_close() {
        let values: BTreeMap<Word, Mat> = [(w("1"), Mat::identity(2)), (w("2"), Mat::identity(2))].into_iter().collect();
        let c = LocallyConstantCocycle::new(SftSpec::full_shift(2), 0, values).unwrap();
        let open = vec![sl2_algebra()[1].clone(), sl2_algebra()[2].clone()];
        assert!(matches!(MatrixCocycle::new(c.clone(), Some(open), 1e-9), Err(Error::AlgebraNotClosed { i: 0, j: 1, .. })));
        assert!(MatrixCocycle::new(c, Some(sl2_algebra()), 1e-9).is_ok());
    }

    #[test]
    fn distortion_examples() {
        let limits = Limits::default();
        let rot = one_symbol(Mat::rotation2(0.4), Mat::rotation2(2.0), Some(so2_algebra()));
        let r = estimate_distortion(&rot, 6, AdMode::Declared, &limits).unwrap();
        assert!((r.mu_s - 1.0).abs() < 1e-12 && (r.mu_u - 1.0).abs() < 1e-12);
        assert!(r.mu_s_sequence.iter().all(|m| (m - 1.0).abs() < 1e-9));
        assert_eq!(check_distortion_assumption(&r, 0.1, DISTORTION_TOL), DistortionVerdict::Satisfied);

        let d = Mat::diagonal(&[2.0, 0.5]);
        let hyp = one_symbol(d.clone(), d, Some(sl2_algebra()));
        let r = estimate_distortion(&hyp, 5, AdMode::Declared, &limits).unwrap();
        assert!(r.mu_s_sequence.iter().all(|m| (m - 4.0).abs() < 1e-9));
        assert!((r.mu_s - 4.0).abs() < 1e-9 && (r.threshold - 2.0).abs() < 1e-9);
        assert_eq!(check_distortion_assumption(&r, 3.0, DISTORTION_TOL), DistortionVerdict::Satisfied);
        assert_eq!(check_distortion_assumption(&r, 2.0, DISTORTION_TOL), DistortionVerdict::Violated);
        assert_eq!(check_distortion_assumption(&r, 2.0 + 1e-7, DISTORTION_TOL), DistortionVerdict::Marginal);
        let amb = estimate_distortion(&hyp, 3, AdMode::Ambient, &limits).unwrap();
        assert!((amb.mu_s - 4.0).abs() < 1e-9);

        let uni = one_symbol(Mat::unipotent3(1.0, 0.5, -2.0), Mat::unipotent3(-0.3, 2.0, 1.0), Some(heisenberg_algebra()));
        let r = estimate_distortion(&uni, 10, AdMode::Declared, &limits).unwrap();
        assert!((r.mu_s - 1.0).abs() < 1e-6 && (r.mu_u - 1.0).abs() < 1e-6, "{r:?}");
        assert!(r.mu_s_upper >= r.mu_s - 1e-9);
    }
}
