//! Subshifts of finite type through their finite combinatorics: transition
//! matrices, higher-block graphs and periodic orbits as cyclic words.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::graph::Digraph;
use crate::{Error, Limits, Result, Word};

/// Alphabet size plus 0/1 transition matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftSpec {
    k: usize,
    allowed: Vec<bool>,
}

impl SftSpec {
    /// Checks shape only: `k >= 2`, square, entries in {0, 1}.
    pub fn new(transition: &[Vec<u8>]) -> Result<Self> {
        let k = transition.len();
        if k < 2 {
            return Err(Error::BadShape(format!("alphabet size {k} < 2")));
        }
        if k > u8::MAX as usize {
            return Err(Error::BadShape(format!("alphabet size {k} too large")));
        }
        let mut allowed = Vec::with_capacity(k * k);
        for (i, row) in transition.iter().enumerate() {
            if row.len() != k {
                return Err(Error::BadShape(format!("row {} has length {}, expected {k}", i + 1, row.len())));
            }
            for (j, &a) in row.iter().enumerate() {
                match a {
                    0 => allowed.push(false),
                    1 => allowed.push(true),
                    _ => return Err(Error::BadShape(format!("entry ({}, {}) is {a}, not 0 or 1", i + 1, j + 1))),
                }
            }
        }
        Ok(SftSpec { k, allowed })
    }

    pub fn full_shift(k: usize) -> Self {
        SftSpec::new(&vec![vec![1; k]; k]).expect("full shift")
    }

    /// The golden-mean shift: `22` is forbidden.
    pub fn golden_mean() -> Self {
        SftSpec::new(&[vec![1, 1], vec![1, 0]]).expect("golden mean")
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    /// Zero-based transition test.
    pub fn allows(&self, from: u8, to: u8) -> bool {
        self.allowed[from as usize * self.k + to as usize]
    }

    pub fn transition_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.allowed[i * self.k + j] as u8).collect())
            .collect()
    }

    pub fn is_admissible(&self, word: &Word) -> bool {
        word.symbols().iter().all(|&s| (s as usize) < self.k)
            && word.symbols().windows(2).all(|w| self.allows(w[0], w[1]))
    }

    /// Admissible including the wrap-around transition.
    pub fn is_cyclically_admissible(&self, word: &Word) -> bool {
        let s = word.symbols();
        !s.is_empty() && self.is_admissible(word) && self.allows(s[s.len() - 1], s[0])
    }

    /// The symbol digraph: one edge per allowed transition.
    pub fn symbol_graph(&self) -> Digraph {
        let mut edges = Vec::new();
        for i in 0..self.k {
            for j in 0..self.k {
                if self.allowed[i * self.k + j] {
                    edges.push((i, j));
                }
            }
        }
        Digraph::new(self.k, edges)
    }
}

/// Outcome of [`validate_sft`]. Irreducibility is guaranteed by construction;
/// the period is informational (1 means aperiodic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub alphabet_size: usize,
    pub irreducible: bool,
    pub period: usize,
    pub aperiodic: bool,
}

pub fn validate_sft(spec: &SftSpec) -> Result<ValidationReport> {
    let k = spec.k;
    for s in 0..k {
        if !(0..k).any(|j| spec.allowed[s * k + j]) {
            return Err(Error::DeadSymbol { symbol: s + 1, line: "row" });
        }
        if !(0..k).any(|i| spec.allowed[i * k + s]) {
            return Err(Error::DeadSymbol { symbol: s + 1, line: "column" });
        }
    }
    let graph = spec.symbol_graph();
    if let Some((from, to)) = graph.unreachable_pair() {
        return Err(Error::NotIrreducible { from: from + 1, to: to + 1 });
    }
    // Period: gcd of level differences along every edge of a BFS layering.
    let (parent, order) = graph.bfs_tree(0);
    let mut level = vec![0i64; k];
    for &v in &order {
        if let Some(e) = parent[v] {
            level[v] = level[graph.edge(e).0] + 1;
        }
    }
    let mut period = 0i64;
    for e in 0..graph.edge_count() {
        let (t, h) = graph.edge(e);
        period = period.gcd(&(level[t] + 1 - level[h]).abs());
    }
    let period = period as usize;
    Ok(ValidationReport { alphabet_size: k, irreducible: true, period, aperiodic: period == 1 })
}

/// Edge of a [`BlockGraph`]: an admissible `(r+1)`-word joining its prefix
/// block to its suffix block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockEdge {
    pub word: Word,
    pub tail: usize,
    pub head: usize,
}

/// The `r`-block presentation: vertices are admissible `r`-words, edges are
/// admissible `(r+1)`-words. Both lists are in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGraph {
    r: usize,
    blocks: Vec<Word>,
    edges: Vec<BlockEdge>,
    index: BTreeMap<Word, usize>,
}

impl BlockGraph {
    pub fn block_length(&self) -> usize {
        self.r
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    pub fn edges(&self) -> &[BlockEdge] {
        &self.edges
    }

    pub fn block_index(&self, block: &Word) -> Option<usize> {
        self.index.get(block).copied()
    }

    pub fn digraph(&self) -> Digraph {
        Digraph::new(self.blocks.len(), self.edges.iter().map(|e| (e.tail, e.head)).collect())
    }

    /// Cyclic symbol word traced by a closed walk (first symbol of each edge).
    pub fn walk_word(&self, edge_ids: &[usize]) -> Word {
        Word(edge_ids.iter().map(|&e| self.edges[e].word.symbols()[0]).collect())
    }
}

/// All admissible words of length `n`, lexicographically.
pub fn admissible_words(spec: &SftSpec, n: usize, cap: usize) -> Result<Vec<Word>> {
    let mut layer: Vec<Vec<u8>> = (0..spec.k as u8).map(|s| vec![s]).collect();
    if n == 0 {
        return Ok(Vec::new());
    }
    for _ in 1..n {
        let mut next = Vec::new();
        for w in &layer {
            let last = *w.last().unwrap();
            for s in 0..spec.k as u8 {
                if spec.allows(last, s) {
                    let mut x = w.clone();
                    x.push(s);
                    next.push(x);
                }
            }
            if next.len() > cap {
                return Err(Error::RangeTooLarge { what: "admissible words", requested: next.len() as u64, cap: cap as u64 });
            }
        }
        layer = next;
    }
    if layer.len() > cap {
        return Err(Error::RangeTooLarge { what: "admissible words", requested: layer.len() as u64, cap: cap as u64 });
    }
    Ok(layer.into_iter().map(Word).collect())
}

pub fn build_block_graph(spec: &SftSpec, r: usize, limits: &Limits) -> Result<BlockGraph> {
    if r == 0 {
        return Err(Error::BadShape("block length must be at least 1".into()));
    }
    let blocks = admissible_words(spec, r, limits.max_states)?;
    let index: BTreeMap<Word, usize> = blocks.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut edges = Vec::new();
    for w in admissible_words(spec, r + 1, limits.max_states.saturating_mul(spec.k))? {
        let tail = index[&Word(w.symbols()[..r].to_vec())];
        let head = index[&Word(w.symbols()[1..].to_vec())];
        edges.push(BlockEdge { word: w, tail, head });
    }
    Ok(BlockGraph { r, blocks, edges, index })
}

/// A primitive periodic orbit, stored as its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodicOrbit {
    word: Word,
}

impl PeriodicOrbit {
    /// Canonicalizes `word`; fails unless it is primitive and cyclically admissible.
    pub fn new(spec: &SftSpec, word: Word) -> Result<Self> {
        if !spec.is_cyclically_admissible(&word) {
            return Err(Error::InadmissibleWord(word));
        }
        if !word.is_primitive() {
            return Err(Error::BadShape(format!("orbit word {word} is not primitive")));
        }
        Ok(PeriodicOrbit { word: word.least_rotation() })
    }

    pub(crate) fn from_canonical(word: Word) -> Self {
        PeriodicOrbit { word }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }
}

impl core::fmt::Display for PeriodicOrbit {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{{{}}}", self.word)
    }
}

/// Exact `trace(A^n)`, the number of points of period dividing `n`.
pub fn count_periodic_points(spec: &SftSpec, n: usize) -> BigUint {
    let k = spec.k;
    let base: Vec<Vec<BigUint>> = (0..k)
        .map(|i| (0..k).map(|j| BigUint::from(spec.allowed[i * k + j] as u8)).collect())
        .collect();
    let mul = |a: &Vec<Vec<BigUint>>, b: &Vec<Vec<BigUint>>| -> Vec<Vec<BigUint>> {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (0..k).fold(BigUint::zero(), |acc, m| acc + &a[i][m] * &b[m][j]))
                    .collect()
            })
            .collect()
    };
    let mut result: Vec<Vec<BigUint>> =
        (0..k).map(|i| (0..k).map(|j| if i == j { BigUint::one() } else { BigUint::zero() }).collect()).collect();
    let mut power = base;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &power);
        }
        e >>= 1;
        if e > 0 {
            power = mul(&power, &power);
        }
    }
    (0..k).fold(BigUint::zero(), |acc, i| acc + &result[i][i])
}

/// Number of admissible words of length `n`, saturating at `u64::MAX`.
pub fn count_admissible_words(spec: &SftSpec, n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    let k = spec.k;
    let mut ends = vec![1u64; k];
    for _ in 1..n {
        ends = (0..k)
            .map(|j| (0..k).filter(|&i| spec.allowed[i * k + j]).fold(0u64, |acc, i| acc.saturating_add(ends[i])))
            .collect();
    }
    ends.into_iter().fold(0, u64::saturating_add)
}

/// Upper bound on the number of primitive orbits of period at most `n`.
fn orbit_count_bound(spec: &SftSpec, n: usize) -> u64 {
    (1..=n)
        .map(|m| (count_periodic_points(spec, m) / BigUint::from(m)).to_u64().unwrap_or(u64::MAX))
        .fold(0u64, |a, b| a.saturating_add(b))
}

pub(crate) fn check_enumeration(spec: &SftSpec, max_period: usize, limits: &Limits) -> Result<()> {
    if max_period > limits.max_period {
        return Err(Error::RangeTooLarge { what: "period", requested: max_period as u64, cap: limits.max_period as u64 });
    }
    if spec.k > limits.max_alphabet {
        return Err(Error::RangeTooLarge { what: "alphabet size", requested: spec.k as u64, cap: limits.max_alphabet as u64 });
    }
    let bound = orbit_count_bound(spec, max_period);
    if bound > limits.max_orbits {
        return Err(Error::RangeTooLarge { what: "orbit count", requested: bound, cap: limits.max_orbits });
    }
    Ok(())
}

/// Every primitive periodic orbit of period at most `max_period`, sorted by
/// `(period, word)`.
///
/// Walks admissible prenecklaces depth-first (the FKM recursion restricted to
/// allowed transitions); a prenecklace whose longest Lyndon prefix is the
/// whole word is a least rotation of a primitive word, and is kept when the
/// wrap-around transition is allowed too.
pub fn enumerate_periodic_orbits(spec: &SftSpec, max_period: usize, limits: &Limits) -> Result<Vec<PeriodicOrbit>> {
    check_enumeration(spec, max_period, limits)?;
    let mut out = Vec::new();
    if max_period == 0 {
        return Ok(out);
    }
    let mut word: Vec<u8> = Vec::with_capacity(max_period);
    for first in 0..spec.k as u8 {
        word.clear();
        word.push(first);
        lyndon_walk(spec, max_period, &mut word, 1, &mut out);
    }
    out.sort_by(|a: &PeriodicOrbit, b| (a.period(), &a.word).cmp(&(b.period(), &b.word)));
    Ok(out)
}

fn lyndon_walk(spec: &SftSpec, n: usize, word: &mut Vec<u8>, p: usize, out: &mut Vec<PeriodicOrbit>) {
    let t = word.len();
    if p == t && spec.allows(word[t - 1], word[0]) {
        out.push(PeriodicOrbit::from_canonical(Word(word.clone())));
    }
    if t == n {
        return;
    }
    let last = word[t - 1];
    let floor = word[t - p];
    for s in floor..spec.k as u8 {
        if !spec.allows(last, s) {
            continue;
        }
        word.push(s);
        lyndon_walk(spec, n, word, if s == floor { p } else { t + 1 }, out);
        word.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec::Vec;

    fn words(orbits: &[PeriodicOrbit]) -> Vec<alloc::string::String> {
        orbits.iter().map(|o| o.word().to_string()).collect()
    }

    #[test]
    fn validation_examples() {
        let full = SftSpec::full_shift(2);
        assert!(validate_sft(&full).unwrap().irreducible);
        let split = SftSpec::new(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(validate_sft(&split), Err(Error::NotIrreducible { from: 1, to: 2 }));
        let golden = validate_sft(&SftSpec::golden_mean()).unwrap();
        assert!(golden.irreducible && golden.aperiodic);
        let swap = SftSpec::new(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(validate_sft(&swap).unwrap().period, 2);
    }

    #[test]
    fn validation_errors() {
        let dead = SftSpec::new(&[vec![1, 1], vec![0, 0]]).unwrap();
        assert!(matches!(validate_sft(&dead), Err(Error::DeadSymbol { symbol: 2, .. })));
        assert!(matches!(SftSpec::new(&[vec![1, 1], vec![1]]), Err(Error::BadShape(_))));
        assert!(matches!(SftSpec::new(&[vec![1, 2], vec![1, 1]]), Err(Error::BadShape(_))));
        assert!(matches!(SftSpec::new(&[vec![1]]), Err(Error::BadShape(_))));
    }

    #[test]
    fn block_graph_examples() {
        let limits = Limits::default();
        let g = build_block_graph(&SftSpec::full_shift(2), 1, &limits).unwrap();
        assert_eq!(g.blocks().len(), 2);
        let e: Vec<_> = g.edges().iter().map(|e| e.word.to_string()).collect();
        assert_eq!(e, ["11", "12", "21", "22"]);

        let g = build_block_graph(&SftSpec::golden_mean(), 1, &limits).unwrap();
        let e: Vec<_> = g.edges().iter().map(|e| e.word.to_string()).collect();
        assert_eq!(e, ["11", "12", "21"]);

        let g = build_block_graph(&SftSpec::golden_mean(), 2, &limits).unwrap();
        let v: Vec<_> = g.blocks().iter().map(|w| w.to_string()).collect();
        assert_eq!(v, ["11", "12", "21"]);
        let e: Vec<_> = g.edges().iter().map(|e| e.word.to_string()).collect();
        assert_eq!(e, ["111", "112", "121", "211", "212"]);
    }

    #[test]
    fn block_graph_cap() {
        let limits = Limits { max_states: 4, ..Limits::default() };
        assert!(matches!(
            build_block_graph(&SftSpec::full_shift(3), 2, &limits),
            Err(Error::RangeTooLarge { .. })
        ));
    }

    #[test]
    fn orbit_examples() {
        let limits = Limits::default();
        let full = SftSpec::full_shift(2);
        assert_eq!(words(&enumerate_periodic_orbits(&full, 2, &limits).unwrap()), ["1", "2", "12"]);
        assert_eq!(
            words(&enumerate_periodic_orbits(&full, 3, &limits).unwrap()),
            ["1", "2", "12", "112", "122"]
        );
        let golden = SftSpec::golden_mean();
        assert_eq!(words(&enumerate_periodic_orbits(&golden, 3, &limits).unwrap()), ["1", "12", "112"]);
        assert!(enumerate_periodic_orbits(&full, 0, &limits).unwrap().is_empty());
    }

    #[test]
    fn orbit_caps() {
        let limits = Limits::default();
        assert!(matches!(
            enumerate_periodic_orbits(&SftSpec::full_shift(2), 17, &limits),
            Err(Error::RangeTooLarge { what: "period", .. })
        ));
        assert!(matches!(
            enumerate_periodic_orbits(&SftSpec::full_shift(9), 2, &limits),
            Err(Error::RangeTooLarge { what: "alphabet size", .. })
        ));
    }

    #[test]
    fn periodic_point_counts() {
        assert_eq!(count_periodic_points(&SftSpec::full_shift(2), 3), BigUint::from(8u32));
        assert_eq!(count_periodic_points(&SftSpec::golden_mean(), 2), BigUint::from(3u32));
        assert_eq!(count_periodic_points(&SftSpec::golden_mean(), 3), BigUint::from(4u32));
        assert_eq!(count_periodic_points(&SftSpec::full_shift(2), 64), BigUint::one() << 64usize);
    }

    #[test]
    fn orbit_constructor_canonicalizes() {
        let full = SftSpec::full_shift(2);
        let o = PeriodicOrbit::new(&full, Word(vec![1, 0, 0])).unwrap();
        assert_eq!(o.word().to_string(), "112");
        assert!(PeriodicOrbit::new(&full, Word(vec![0, 1, 0, 1])).is_err());
        assert!(PeriodicOrbit::new(&SftSpec::golden_mean(), Word(vec![1, 1, 0])).is_err());
    }
}
