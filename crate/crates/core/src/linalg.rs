//! Exact linear algebra over the rationals: row reduction, rank, kernels.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// Reduced row echelon form of a set of rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref {
    pub rows: Vec<Vec<Rational>>,
    /// Pivot column of each row of `rows`.
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect()
    }
}

/// Row reduces `rows`, choosing pivot columns in the order given by
/// `column_order` (a permutation of `0..ncols`).
pub fn rref_with_order(rows: &[Vec<Rational>], ncols: usize, column_order: &[usize]) -> Rref {
    let mut m: Vec<Vec<Rational>> = rows.iter().filter(|r| !r.iter().all(Zero::is_zero)).cloned().collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for &col in column_order {
        if rank == m.len() {
            break;
        }
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for x in m[rank].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    Rref { rows: m, pivots, ncols }
}

pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> Rref {
    let order: Vec<usize> = (0..ncols).collect();
    rref_with_order(rows, ncols, &order)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    match rows.first() {
        None => 0,
        Some(r) => rref(rows, r.len()).rank(),
    }
}

/// Rank computed with pivots taken from the last column backwards. Used as an
/// independent elimination order when cross-checking ranks.
pub fn rank_reverse_order(rows: &[Vec<Rational>]) -> usize {
    match rows.first() {
        None => 0,
        Some(r) => {
            let order: Vec<usize> = (0..r.len()).rev().collect();
            let mut reversed: Vec<Vec<Rational>> = rows.to_vec();
            reversed.reverse();
            rref_with_order(&reversed, r.len(), &order).rank()
        }
    }
}

/// Basis of `{x : row·x = 0 for all rows}` in `ncols` dimensions.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let r = rref(rows, ncols);
    r.free_columns()
        .into_iter()
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &p) in r.rows.iter().zip(&r.pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Solves `x · basis = target` for `x` when `target` lies in the row span of
/// `basis` (rows assumed independent). Returns `None` otherwise.
pub fn express_in_rows(basis: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let d = target.len();
    // Columns of the transposed system: unknowns x_0..x_{k-1}, plus rhs.
    let mut aug: Vec<Vec<Rational>> = (0..d)
        .map(|c| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[c].clone()).collect();
            row.push(target[c].clone());
            row
        })
        .collect();
    let red = rref(&aug, k + 1);
    if red.pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        x[p] = row[k].clone();
    }
    aug.clear();
    Some(x)
}

/// 2^61 - 1.
pub const MODULUS: u64 = (1u64 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

pub fn reduce_mod(x: &BigInt) -> u64 {
    let m = BigInt::from(MODULUS);
    let mut r = x % &m;
    if r.is_negative() {
        r += &m;
    }
    r.to_u64().expect("residue fits in u64")
}

/// Rank of an integer matrix modulo the prime [`MODULUS`]. This is a lower
/// bound for the rank over the rationals.
pub fn rank_mod_p(rows: &mut [Vec<u64>]) -> usize {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = powmod(rows[rank][col], MODULUS - 2);
        for x in rows[rank].iter_mut() {
            *x = mulmod(*x, inv);
        }
        let (done, rest) = rows.split_at_mut(rank + 1);
        let pivot_row = &done[rank];
        for row in rest {
            let f = row[col];
            if f == 0 {
                continue;
            }
            for (x, &p) in row[col..ncols].iter_mut().zip(&pivot_row[col..ncols]) {
                *x = (*x + MODULUS - mulmod(f, p)) % MODULUS;
            }
        }
        rank += 1;
    }
    rank
}
