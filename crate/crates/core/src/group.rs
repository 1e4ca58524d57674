//! Covering groups: finite groups (Cayley table, permutation closure or
//! cyclic) and free abelian groups `Z^d`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::{Error, Limits, Result};

/// How a covering group is described.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    /// Multiplication table over named elements; `table[a][b]` is `a * b`.
    Table { names: Vec<String>, table: Vec<Vec<usize>> },
    /// Generators as one-based image lists on `degree` points. Products
    /// compose right to left: `(p * q)(x) = p(q(x))`.
    Permutation { degree: usize, generators: Vec<Vec<usize>> },
    Cyclic { order: usize },
    FreeAbelian { rank: usize },
}

/// Handle to a group element: an index into a finite group's element list,
/// or an integer vector for `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElement {
    Finite(usize),
    Vector(Vec<i64>),
}

impl GroupElement {
    pub fn index(&self) -> Option<usize> {
        match self {
            GroupElement::Finite(i) => Some(*i),
            GroupElement::Vector(_) => None,
        }
    }

    pub fn vector(&self) -> Option<&[i64]> {
        match self {
            GroupElement::Vector(v) => Some(v),
            GroupElement::Finite(_) => None,
        }
    }
}

/// A finite group with precomputed multiplication and inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    trusted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    Finite(FiniteGroup),
    FreeAbelian { rank: usize },
}

/// A conjugacy class of a finite group; `members` are sorted element indices
/// and the representative is the smallest of them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl FiniteGroup {
    /// Builds from a raw table; verifies closure, identity, Latin-square
    /// inverses and (up to `max_verified_order`) associativity.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>, limits: &Limits) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::BadShape("empty group table".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::BadShape(format!("group table must be {n}x{n}")));
        }
        {
            let mut seen = names.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != n {
                return Err(Error::BadShape("duplicate element names".into()));
            }
        }
        let mut mul = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if c >= n {
                    return Err(Error::NotAGroup { reason: "product outside the element set", witness: [a, b, c] });
                }
                mul.push(c);
            }
        }
        // Latin square: every row and column is a permutation.
        for a in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for b in 0..n {
                let r = mul[a * n + b];
                let c = mul[b * n + a];
                if row_seen[r] {
                    return Err(Error::NotAGroup { reason: "table is not a Latin square", witness: [a, b, r] });
                }
                if col_seen[c] {
                    return Err(Error::NotAGroup { reason: "table is not a Latin square", witness: [b, a, c] });
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul[e * n + a] == a && mul[a * n + e] == a))
            .ok_or(Error::NotAGroup { reason: "no identity element", witness: [0, 0, 0] })?;
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| mul[a * n + b] == identity && mul[b * n + a] == identity)
                .ok_or(Error::NotAGroup { reason: "missing inverse", witness: [a, a, a] })?;
        }
        let trusted = n > limits.max_verified_order;
        if !trusted {
            for a in 0..n {
                for b in 0..n {
                    let ab = mul[a * n + b];
                    for c in 0..n {
                        if mul[ab * n + c] != mul[a * n + mul[b * n + c]] {
                            return Err(Error::NotAGroup { reason: "multiplication is not associative", witness: [a, b, c] });
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup { names, mul, inv, identity, trusted })
    }

    /// `Z/n` with elements `e, g, g^2, ...`.
    pub fn cyclic(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::BadShape("cyclic group of order 0".into()));
        }
        let names = (0..order)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        let mul = (0..order * order).map(|ab| (ab / order + ab % order) % order).collect();
        let inv = (0..order).map(|a| (order - a) % order).collect();
        Ok(FiniteGroup { names, mul, inv, identity: 0, trusted: false })
    }

    /// The quaternion group `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        let (names, table) = quaternion_table();
        FiniteGroup::from_table(names, table, &Limits::default()).expect("valid table")
    }

    /// The symmetric group on three points, generated by `(1 2)` and `(1 2 3)`.
    pub fn symmetric3() -> Self {
        FiniteGroup::from_permutations(3, &[vec![2, 1, 3], vec![2, 3, 1]], &Limits::default()).expect("valid generators")
    }

    /// Breadth-first closure of permutation generators. Elements are ordered
    /// by their shortlex-least word in the generators (named `a`, `b`, ...)
    /// and carry that word as their name; the identity is `e`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>], limits: &Limits) -> Result<Self> {
        if degree == 0 {
            return Err(Error::BadShape("permutation degree 0".into()));
        }
        if generators.len() > 26 {
            return Err(Error::BadShape("at most 26 generators".into()));
        }
        let mut gens = Vec::new();
        for g in generators {
            if g.len() != degree {
                return Err(Error::BadShape(format!("generator has {} images, expected {degree}", g.len())));
            }
            let mut seen = vec![false; degree];
            let mut p = Vec::with_capacity(degree);
            for &img in g {
                if img == 0 || img > degree || seen[img - 1] {
                    return Err(Error::BadShape(format!("generator {g:?} is not a permutation")));
                }
                seen[img - 1] = true;
                p.push(img - 1);
            }
            gens.push(p);
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut names = vec!["e".to_string()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                // word * generator: apply the generator first.
                let p: Vec<usize> = (0..degree).map(|x| elements[i][g[x]]).collect();
                if !index.contains_key(&p) {
                    if elements.len() >= limits.max_group_order {
                        return Err(Error::ClosureTooLarge { cap: limits.max_group_order });
                    }
                    let letter = (b'a' + gi as u8) as char;
                    let name = if i == 0 { letter.to_string() } else { format!("{}{letter}", names[i]) };
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                    names.push(name);
                }
            }
        }
        let n = elements.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                let ab: Vec<usize> = (0..degree).map(|x| a[b[x]]).collect();
                mul.push(index[&ab]);
            }
        }
        let inv = (0..n).map(|a| (0..n).find(|&b| mul[a * n + b] == 0).unwrap()).collect();
        Ok(FiniteGroup { names, mul, inv, identity: 0, trusted: false })
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// True when the table was too large to verify associativity.
    pub fn is_trusted(&self) -> bool {
        self.trusted
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n).map(|g| self.mul(self.mul(g, a), self.inv(g))).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(ConjugacyClass { representative: members[0], members });
        }
        classes
    }

    pub fn class_of(&self, a: usize) -> ConjugacyClass {
        let mut members: Vec<usize> = (0..self.order()).map(|g| self.mul(self.mul(g, a), self.inv(g))).collect();
        members.sort_unstable();
        members.dedup();
        ConjugacyClass { representative: members[0], members }
    }

    pub fn center(&self) -> Vec<usize> {
        let n = self.order();
        (0..n).filter(|&z| (0..n).all(|h| self.mul(z, h) == self.mul(h, z))).collect()
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generating_set(&self) -> Vec<usize> {
        let n = self.order();
        let mut gens = Vec::new();
        let mut span = vec![false; n];
        span[self.identity] = true;
        for a in 0..n {
            if span[a] {
                continue;
            }
            gens.push(a);
            // Re-close under all generators.
            let mut frontier: Vec<usize> = (0..n).filter(|&x| span[x]).collect();
            while let Some(x) = frontier.pop() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !span[y] {
                        span[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }

    /// Every homomorphism into the circle group `Q/Z`, each given as the
    /// angle fraction `(numerator, denominator)` of every element in element
    /// order. The trivial character comes first.
    pub fn circle_characters(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.order();
        let exp = self.exponent();
        let gens = self.generating_set();
        let combos = (exp as u64).checked_pow(gens.len() as u32).unwrap_or(u64::MAX);
        let mut out = Vec::new();
        if combos > 1 << 20 {
            out.push(vec![(0, 1); n]);
            return out;
        }
        let mut choice = vec![0usize; gens.len()];
        'outer: loop {
            // Extend along the Cayley graph and check consistency.
            let mut value: Vec<Option<usize>> = vec![None; n];
            value[self.identity] = Some(0);
            let mut queue = VecDeque::from([self.identity]);
            let mut ok = true;
            while let Some(x) = queue.pop_front() {
                for (gi, &g) in gens.iter().enumerate() {
                    let y = self.mul(x, g);
                    let v = (value[x].unwrap() + choice[gi]) % exp;
                    match value[y] {
                        None => {
                            value[y] = Some(v);
                            queue.push_back(y);
                        }
                        Some(w) if w != v => {
                            ok = false;
                            break;
                        }
                        _ => {}
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                let chi: Vec<(usize, usize)> = value
                    .iter()
                    .map(|v| {
                        let v = v.unwrap();
                        let g = v.gcd(&exp);
                        (v / g, exp / g)
                    })
                    .collect();
                out.push(chi);
            }
            for slot in choice.iter_mut() {
                *slot += 1;
                if *slot < exp {
                    continue 'outer;
                }
                *slot = 0;
            }
            break;
        }
        out
    }
}

impl Group {
    pub fn build(spec: &GroupSpec, limits: &Limits) -> Result<Self> {
        Ok(match spec {
            GroupSpec::Table { names, table } => Group::Finite(FiniteGroup::from_table(names.clone(), table.clone(), limits)?),
            GroupSpec::Permutation { degree, generators } => {
                Group::Finite(FiniteGroup::from_permutations(*degree, generators, limits)?)
            }
            GroupSpec::Cyclic { order } => Group::Finite(FiniteGroup::cyclic(*order)?),
            GroupSpec::FreeAbelian { rank } => {
                if *rank == 0 {
                    return Err(Error::BadShape("free abelian rank must be at least 1".into()));
                }
                Group::FreeAbelian { rank: *rank }
            }
        })
    }

    pub fn as_finite(&self) -> Result<&FiniteGroup> {
        match self {
            Group::Finite(g) => Ok(g),
            Group::FreeAbelian { .. } => Err(Error::InfiniteGroup),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Group::Finite(_))
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Group::Finite(g) => GroupElement::Finite(g.identity()),
            Group::FreeAbelian { rank } => GroupElement::Vector(vec![0; *rank]),
        }
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        match (self, a) {
            (Group::Finite(g), GroupElement::Finite(i)) => *i == g.identity(),
            (Group::FreeAbelian { .. }, GroupElement::Vector(v)) => v.iter().all(|&x| x == 0),
            _ => false,
        }
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        match (self, a) {
            (Group::Finite(g), GroupElement::Finite(i)) => *i < g.order(),
            (Group::FreeAbelian { rank }, GroupElement::Vector(v)) => v.len() == *rank,
            _ => false,
        }
    }

    /// Group product `a * b`. Panics on elements of the wrong kind.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (Group::Finite(g), GroupElement::Finite(x), GroupElement::Finite(y)) => GroupElement::Finite(g.mul(*x, *y)),
            (Group::FreeAbelian { .. }, GroupElement::Vector(x), GroupElement::Vector(y)) => {
                GroupElement::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            _ => panic!("group elements from different groups"),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (Group::Finite(g), GroupElement::Finite(x)) => GroupElement::Finite(g.inv(*x)),
            (Group::FreeAbelian { .. }, GroupElement::Vector(x)) => GroupElement::Vector(x.iter().map(|p| -p).collect()),
            _ => panic!("group element from a different group"),
        }
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            Group::Finite(g) => Some(g.order()),
            Group::FreeAbelian { .. } => None,
        }
    }

    pub fn conjugacy_classes(&self) -> Result<Vec<ConjugacyClass>> {
        Ok(self.as_finite()?.conjugacy_classes())
    }

    pub fn center(&self) -> Result<Vec<usize>> {
        Ok(self.as_finite()?.center())
    }

    /// Element name: table/closure name for finite groups, `(a,b,...)` for `Z^d`.
    pub fn format(&self, a: &GroupElement) -> String {
        match (self, a) {
            (Group::Finite(g), GroupElement::Finite(i)) => g.name(*i).to_string(),
            (_, GroupElement::Vector(v)) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            }
            _ => panic!("group element from a different group"),
        }
    }

    /// Inverse of [`Group::format`]. For rank one a bare integer is accepted too.
    pub fn parse(&self, text: &str) -> Result<GroupElement> {
        match self {
            Group::Finite(g) => g.lookup(text).map(GroupElement::Finite).ok_or_else(|| Error::UnknownElement(text.into())),
            Group::FreeAbelian { rank } => {
                let t = text.trim();
                let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t);
                let v: core::result::Result<Vec<i64>, _> =
                    inner.split(',').map(|p| p.trim().trim_start_matches('+').parse::<i64>()).collect();
                let v = v.map_err(|_| Error::UnknownElement(text.into()))?;
                if v.len() != *rank {
                    return Err(Error::DimensionMismatch { expected: *rank, found: v.len() });
                }
                Ok(GroupElement::Vector(v))
            }
        }
    }
}

/// Parses cycle notation such as `(1 2)(3 4 5)` into one-based images.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Vec<usize>> {
    let bad = || Error::BadShape(format!("bad cycle notation {text:?}"));
    let mut images: Vec<usize> = (1..=degree).collect();
    let mut rest = text.trim();
    if rest.is_empty() || rest == "()" {
        return Ok(images);
    }
    let mut seen = vec![false; degree + 1];
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = body.find(')').ok_or_else(bad)?;
        let points: core::result::Result<Vec<usize>, _> =
            body[..close].split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(str::parse).collect();
        let points = points.map_err(|_| bad())?;
        for &p in &points {
            if p == 0 || p > degree || seen[p] {
                return Err(bad());
            }
            seen[p] = true;
        }
        for (i, &p) in points.iter().enumerate() {
            images[p - 1] = points[(i + 1) % points.len()];
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(images)
}

/// Cayley table of the quaternion group `Q8`.
fn quaternion_table() -> (Vec<String>, Vec<Vec<usize>>) {
    // Elements 1, -1, i, -i, j, -j, k, -k encoded as (sign, unit).
    let names: Vec<String> = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
    // unit products: units 0=1, 1=i, 2=j, 3=k
    let unit = |a: usize, b: usize| -> (bool, usize) {
        match (a, b) {
            (0, x) | (x, 0) => (false, x),
            (x, y) if x == y => (true, 0),
            (1, 2) => (false, 3),
            (2, 1) => (true, 3),
            (2, 3) => (false, 1),
            (3, 2) => (true, 1),
            (3, 1) => (false, 2),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    };
    let table = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (neg, u) = unit(a / 2, b / 2);
                    let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                    u * 2 + sign as usize
                })
                .collect()
        })
        .collect();
    (names, table)
}
