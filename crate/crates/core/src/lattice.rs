//! Subgroups of `Z^d` generated by finitely many vectors, via the Smith
//! normal form.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeReport {
    pub rank: usize,
    /// True iff the vectors generate all of `Z^d`.
    pub full: bool,
    /// Nonzero elementary divisors `d_1 | d_2 | ...`.
    pub divisors: Vec<BigInt>,
}

/// Rank, fullness and elementary divisors of the subgroup generated by
/// `vectors` inside `Z^dimension`.
pub fn subgroup_rank_and_index(vectors: &[Vec<i64>], dimension: usize) -> Result<LatticeReport> {
    for v in vectors {
        if v.len() != dimension {
            return Err(Error::DimensionMismatch { expected: dimension, found: v.len() });
        }
    }
    let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let divisors = smith_diagonal(rows, dimension);
    let rank = divisors.len();
    let full = rank == dimension && divisors.iter().all(|d| d.is_one());
    Ok(LatticeReport { rank, full, divisors })
}

/// Nonzero diagonal of the Smith normal form of an `m x n` integer matrix.
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>, n: usize) -> Vec<BigInt> {
    let m = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            // Clear column t below the pivot.
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..n {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    dirty = true;
                }
            }
            // Clear row t right of the pivot.
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: the pivot must divide every remaining entry.
            let mut fix = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        fix = Some(i);
                        break 'scan;
                    }
                }
            }
            match fix {
                Some(i) => {
                    for j in t..n {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn report(vs: &[Vec<i64>], d: usize) -> LatticeReport {
        subgroup_rank_and_index(vs, d).unwrap()
    }

    #[test]
    fn examples() {
        let r = report(&[vec![2]], 1);
        assert_eq!((r.rank, r.full), (1, false));
        assert_eq!(r.divisors, vec![BigInt::from(2)]);
        assert!(report(&[vec![1, 0], vec![0, 1]], 2).full);
        assert!(report(&[vec![2, 0], vec![3, 0], vec![0, 1]], 2).full);
        let r = report(&[vec![2, 4], vec![4, 8]], 2);
        assert_eq!((r.rank, r.full), (1, false));
        assert_eq!(report(&[], 2).rank, 0);
        assert_eq!(
            subgroup_rank_and_index(&[vec![1]], 2),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    fn det(m: &[Vec<i64>]) -> i64 {
        match m.len() {
            0 => 1,
            1 => m[0][0],
            n => (0..n)
                .map(|c| {
                    let minor: Vec<Vec<i64>> =
                        m[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect()).collect();
                    let s = if c % 2 == 0 { 1 } else { -1 };
                    s * m[0][c] * det(&minor)
                })
                .sum(),
        }
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    /// gcd of all i x i minors equals d_1 * ... * d_i (determinantal divisors).
    fn determinantal_divisor(m: &[Vec<i64>], d: usize, i: usize) -> i64 {
        let mut g = 0i64;
        for rows in subsets(m.len(), i) {
            for cols in subsets(d, i) {
                let minor: Vec<Vec<i64>> = rows.iter().map(|&r| cols.iter().map(|&c| m[r][c]).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        g
    }

    // Membership oracle: e_j lies in the lattice iff adding it leaves every
    // top determinantal divisor unchanged; full iff the d x d divisor is 1.
    proptest! {
        #[test]
        fn smith_form_matches_minor_oracle(
            d in 1usize..=3,
            raw in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 0..4),
        ) {
            let vs: Vec<Vec<i64>> = raw.into_iter().map(|v| v[..d].to_vec()).collect();
            let r = report(&vs, d);
            let mut product = BigInt::one();
            for i in 1..=d.min(vs.len()) {
                let dd = determinantal_divisor(&vs, d, i);
                if dd == 0 {
                    prop_assert!(r.rank < i);
                    break;
                }
                prop_assert!(r.rank >= i);
                product *= &r.divisors[i - 1];
                prop_assert_eq!(product.clone(), BigInt::from(dd));
            }
            let full_oracle = vs.len() >= d && determinantal_divisor(&vs, d, d) == 1;
            prop_assert_eq!(r.full, full_oracle);
        }
    }
}
