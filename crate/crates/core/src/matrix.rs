//! Determinants of square matrices with polynomial entries.
//!
//! Small matrices use memoized Laplace expansion; larger ones use Bareiss
//! fraction-free elimination, whose divisions are exact in the polynomial ring.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest size handled by cofactor expansion in [`determinant`].
pub const COFACTOR_LIMIT: usize = 4;

fn check_square(m: &[Vec<Poly>]) -> Result<usize> {
    let n = m.len();
    if n == 0 {
        return Err(Error::Shape("empty matrix".into()));
    }
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(Error::Shape(format!(
            "expected a square {n}x{n} matrix, found a row of length {}",
            row.len()
        )));
    }
    let l = m[0][0].l();
    for p in m.iter().flatten() {
        if p.l() != l && p.l() != 0 && l != 0 {
            return Err(Error::AmbientMismatch {
                left: l,
                right: p.l(),
            });
        }
    }
    Ok(n)
}

fn ambient_of(m: &[Vec<Poly>]) -> usize {
    m.iter().flatten().map(Poly::l).max().unwrap_or(0)
}

pub fn determinant(m: &[Vec<Poly>]) -> Result<Poly> {
    let n = check_square(m)?;
    if n <= COFACTOR_LIMIT {
        determinant_cofactor(m)
    } else {
        determinant_bareiss(m)
    }
}

/// Laplace expansion along successive rows, memoized on the set of remaining columns.
pub fn determinant_cofactor(m: &[Vec<Poly>]) -> Result<Poly> {
    let n = check_square(m)?;
    if n > 20 {
        return Err(Error::Shape("cofactor expansion limited to 20x20".into()));
    }
    let l = ambient_of(m);
    let mut memo: HashMap<u32, Poly> = HashMap::new();
    Ok(minor(m, 0, (1u32 << n) - 1, l, &mut memo))
}

fn minor(m: &[Vec<Poly>], row: usize, cols: u32, l: usize, memo: &mut HashMap<u32, Poly>) -> Poly {
    if cols == 0 {
        return Poly::one(l);
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut acc = Poly::zero(l);
    let mut position = 0;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let sub = minor(m, row + 1, cols & !(1 << c), l, memo);
            let term = entry * &sub;
            acc = if position % 2 == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        position += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Bareiss fraction-free elimination with row pivoting on nonzero entries.
pub fn determinant_bareiss(m: &[Vec<Poly>]) -> Result<Poly> {
    let n = check_square(m)?;
    let l = ambient_of(m);
    let mut a: Vec<Vec<Poly>> = m
        .iter()
        .map(|r| r.iter().map(|p| p.embed(l)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut negate = false;
    let mut prev = Poly::one(l);
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(Poly::zero(l)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev)?
                    .expect("Bareiss division is exact in a polynomial ring");
            }
            a[i][k] = Poly::zero(l);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}
