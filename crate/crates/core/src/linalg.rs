//! Exact rational linear algebra: fraction-free row reduction with
//! left-multiplier tracking, and a small simplex for nonnegative solutions.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Result of solving `M x = b` exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution {
    /// A solution with every free variable set to zero, plus the indices of
    /// the free variables.
    Consistent { x: Vec<Rational>, free: Vec<usize> },
    /// Integer row combination `y` with `y^T M = 0` and `y^T b != 0`.
    Inconsistent { certificate: Vec<BigInt> },
}

/// Solves `M x = b` over the rationals. `matrix` is given row by row as
/// sparse `(column, coefficient)` lists.
///
/// Rows are scaled to integers and reduced fraction-free (Bareiss-style
/// cross multiplication followed by content division), while an identity
/// block records the row operations so an inconsistent system yields a
/// certificate.
pub fn solve_rational(matrix: &[Vec<(usize, Rational)>], rhs: &[Rational], columns: usize) -> LinearSolution {
    let rows = matrix.len();
    // Augmented integer rows: [coefficients | rhs | multipliers].
    let width = columns + 1 + rows;
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(rows);
    for (i, row) in matrix.iter().enumerate() {
        let mut denom = rhs[i].denom().clone();
        for (_, c) in row {
            denom = denom.lcm(c.denom());
        }
        let mut r = vec![BigInt::zero(); width];
        for (j, c) in row {
            r[*j] += c.numer() * (&denom / c.denom());
        }
        r[columns] = rhs[i].numer() * (&denom / rhs[i].denom());
        r[columns + 1 + i] = denom;
        a.push(r);
    }
    let mut pivot_cols = Vec::new();
    let mut pivot_row = 0;
    for col in 0..columns {
        let Some(p) = (pivot_row..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(pivot_row, p);
        for i in 0..rows {
            if i == pivot_row || a[i][col].is_zero() {
                continue;
            }
            let g = a[i][col].gcd(&a[pivot_row][col]);
            let fi = &a[pivot_row][col] / &g;
            let fp = &a[i][col] / &g;
            let (top, bottom) = if i < pivot_row {
                let (x, y) = a.split_at_mut(pivot_row);
                (&y[0], &mut x[i])
            } else {
                let (x, y) = a.split_at_mut(i);
                (&x[pivot_row], &mut y[0])
            };
            for j in 0..width {
                bottom[j] = &bottom[j] * &fi - &top[j] * &fp;
            }
            normalize_content(bottom);
        }
        pivot_cols.push(col);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    for i in pivot_row..rows {
        if !a[i][columns].is_zero() {
            let mut certificate: Vec<BigInt> = a[i][columns + 1..].to_vec();
            if a[i][columns].is_negative() {
                for c in certificate.iter_mut() {
                    *c = -&*c;
                }
            }
            return LinearSolution::Inconsistent { certificate };
        }
    }
    let mut x = vec![Rational::zero(); columns];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[col] = Rational::new(a[r][columns].clone(), a[r][col].clone());
    }
    let free = (0..columns).filter(|c| !pivot_cols.contains(c)).collect();
    LinearSolution::Consistent { x, free }
}

fn normalize_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                return;
            }
        }
    }
    if g > BigInt::one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Finds `x >= 0` with `A x = b` (phase one of the simplex method with
/// Bland's rule, exact arithmetic). `a` is dense, `rows x columns`.
pub fn nonnegative_solution(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    // Tableau with artificials: columns 0..n originals, n..n+m artificials, last = rhs.
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: Vec<Rational> = a[i].iter().map(|v| if flip { -v } else { v.clone() }).collect();
        row.extend((0..m).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
        row.push(if flip { -&b[i] } else { b[i].clone() });
        t.push(row);
    }
    let width = n + m + 1;
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Objective: minimize the sum of artificials; reduced costs row.
    let mut cost = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..width {
            if j < n || j == width - 1 {
                cost[j] -= &row[j];
            }
        }
    }
    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else { break };
        let pivot = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter].clone();
                for j in 0..width {
                    row[j] -= &f * &prow[j];
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for j in 0..width {
                cost[j] -= &f * &prow[j];
            }
        }
        basis[p] = enter;
    }
    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        } else if !t[i][width - 1].is_zero() {
            return None;
        }
    }
    Some(x)
}
