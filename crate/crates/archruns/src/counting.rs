//! Exact run counting.
//!
//! The count `t(n,k)` of runs of the `(n,k)`-arch process satisfies
//!
//! ```text
//! 2 t(n,k) = (n+2k-1) t(n,k-1) + (n-k) t(n+1,k-1),    t(n,0) = 1,
//! ```
//!
//! and computing `t(n,k)` touches exactly the triangle of cells
//! `{(n', k') : n <= n' <= n+k, 0 <= k' <= k-(n'-n)}`. [`CountTable`] holds
//! that triangle in arbitrary precision; [`PositionTable`] refines it by
//! the final position of `x1` (`c1` when `k = n`), which drives unranking.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedSub, One, Zero};

use crate::{Error, Result};

/// Memoized triangle of exact counts rooted at `(n, k)`.
///
/// Row `d` (depth, so `k' = k - d`) holds the values for
/// `n' = n … n + d`. After construction the table is immutable and can be
/// shared freely across threads.
#[derive(Debug, Clone)]
pub struct CountTable {
    n: u32,
    k: u32,
    rows: Vec<Vec<BigUint>>,
}

/// Fills the whole triangle needed for `t(n,k)` bottom-up, asserting the
/// evenness of every numerator before halving.
pub fn build_count_table(n: u32, k: u32) -> Result<CountTable> {
    if (k as u64) > (n as u64) + 1 {
        return Err(Error::InvalidShape { n, k });
    }
    let kk = k as usize;
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(kk + 1);
    rows.push(vec![BigUint::one(); kk + 1]); // k' = 0 row, all ones
    for d in (0..kk).rev() {
        let kp = k as u64 - d as u64;
        let prev = rows.last().expect("previous row exists");
        let mut row = Vec::with_capacity(d + 1);
        for j in 0..=d {
            let np = n as u64 + j as u64;
            let mut num: BigUint = &prev[j] * BigUint::from(np + 2 * kp - 1);
            if np >= kp {
                num += &prev[j + 1] * BigUint::from(np - kp);
            } else {
                // only the apex of a k = n+1 triangle can reach this branch
                let sub = &prev[j + 1] * BigUint::from(kp - np);
                num = num
                    .checked_sub(&sub)
                    .expect("count recurrence must stay non-negative in-domain");
            }
            assert!(
                num.is_even(),
                "odd numerator in the count recurrence at ({np},{kp})"
            );
            row.push(num >> 1);
        }
        rows.push(row);
    }
    rows.reverse(); // rows[d] now holds depth d = k - k'
    Ok(CountTable { n, k, rows })
}

impl CountTable {
    pub fn base(&self) -> (u32, u32) {
        (self.n, self.k)
    }

    /// Exact `t(n', k')` for any cell of the triangle.
    pub fn get(&self, n: u32, k: u32) -> Result<&BigUint> {
        let missing = Error::MissingCell {
            n,
            k,
            base_n: self.n,
            base_k: self.k,
        };
        if k > self.k || n < self.n {
            return Err(missing);
        }
        let d = (self.k - k) as usize;
        let j = (n - self.n) as usize;
        if j > d {
            return Err(missing);
        }
        Ok(&self.rows[d][j])
    }

    /// `t` at the base shape the table was built for.
    pub fn total(&self) -> &BigUint {
        &self.rows[0][0]
    }

    pub fn runs_count(&self, n: u32, k: u32) -> Result<BigUint> {
        self.get(n, k).cloned()
    }

    /// All `(n', k', value)` cells, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (u32, u32, &BigUint)> {
        self.rows.iter().enumerate().flat_map(move |(d, row)| {
            row.iter()
                .enumerate()
                .map(move |(j, v)| (self.n + j as u32, self.k - d as u32, v))
        })
    }

    /// Number of cells in the triangle.
    pub fn cell_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub(crate) fn from_rows(n: u32, k: u32, rows: Vec<Vec<BigUint>>) -> CountTable {
        CountTable { n, k, rows }
    }
}

/// Position-refined counts `t(n', k', l)`: the number of runs of the
/// `(n',k')`-arch process whose action `x1` (`c1` when `k' = n'`) sits at
/// position `l`. Supported for `l` in `[k'+1, 2k'+1]` (just `l = 1` for
/// `k' = 0`); zero outside.
#[derive(Debug, Clone)]
pub struct PositionTable {
    n: u32,
    k: u32,
    rows: Vec<Vec<Vec<BigUint>>>,
}

/// Fills the position triangle for `(n, k)` using
/// `t(n,k,l) = (l-2) t(n,k-1,l-2) + (n-k) t(n+1,k-1,l-1)`.
///
/// Unranking covers `k <= n` only, and so does this table.
pub fn build_position_table(n: u32, k: u32) -> Result<PositionTable> {
    if k > n {
        return Err(Error::UnsupportedShape { n, k });
    }
    let kk = k as usize;
    let mut rows: Vec<Vec<Vec<BigUint>>> = Vec::with_capacity(kk + 1);
    rows.push(vec![vec![BigUint::one()]; kk + 1]); // k' = 0: x1 is always first
    for d in (0..kk).rev() {
        let kp = k as u64 - d as u64;
        let prev = rows.last().expect("previous row exists");
        let child_k = (kp - 1) as u32;
        let mut row = Vec::with_capacity(d + 1);
        for j in 0..=d {
            let np = n as u64 + j as u64;
            let mut cell = Vec::with_capacity(kp as usize + 1);
            for l in (kp + 1)..=(2 * kp + 1) {
                let mut v = BigUint::zero();
                if let Some(t1) = row_get(&prev[j], child_k, l - 2) {
                    v += t1 * BigUint::from(l - 2);
                }
                if let Some(t2) = row_get(&prev[j + 1], child_k, l - 1) {
                    v += t2 * BigUint::from(np - kp);
                }
                cell.push(v);
            }
            row.push(cell);
        }
        rows.push(row);
    }
    rows.reverse();
    Ok(PositionTable { n, k, rows })
}

fn row_get(cell: &[BigUint], k: u32, l: u64) -> Option<&BigUint> {
    if k == 0 {
        return if l == 1 { cell.first() } else { None };
    }
    let lo = k as u64 + 1;
    if l < lo || l > 2 * k as u64 + 1 {
        return None;
    }
    cell.get((l - lo) as usize)
}

impl PositionTable {
    pub fn base(&self) -> (u32, u32) {
        (self.n, self.k)
    }

    /// Supported position range `[lo, hi]` for a cell with `k'` arches.
    pub fn position_range(k: u32) -> (u64, u64) {
        if k == 0 {
            (1, 1)
        } else {
            (k as u64 + 1, 2 * k as u64 + 1)
        }
    }

    /// Exact `t(n', k', l)`; zero for `l` outside the supported range.
    pub fn get(&self, n: u32, k: u32, l: u64) -> Result<BigUint> {
        let missing = Error::MissingCell {
            n,
            k,
            base_n: self.n,
            base_k: self.k,
        };
        if k > self.k || n < self.n {
            return Err(missing);
        }
        let d = (self.k - k) as usize;
        let j = (n - self.n) as usize;
        if j > d {
            return Err(missing);
        }
        Ok(row_get(&self.rows[d][j], k, l).cloned().unwrap_or_default())
    }
}

/// `n!/(n-k)!`: runs where the inserted arch actions stay clamped between
/// the trunk endpoints. Defined for `k <= n`.
pub fn lower_bound(n: u32, k: u32) -> Result<BigUint> {
    if k > n {
        return Err(Error::Domain(format!(
            "bounds are defined for k <= n (got n={n}, k={k})"
        )));
    }
    Ok(falling_product(n as u64 - k as u64 + 1, n as u64))
}

/// `(n+2k-1)!/(n+k-1)!`: arch actions shuffled freely into the trunk.
/// Defined for `k <= n`.
pub fn upper_bound(n: u32, k: u32) -> Result<BigUint> {
    if k > n {
        return Err(Error::Domain(format!(
            "bounds are defined for k <= n (got n={n}, k={k})"
        )));
    }
    if k == 0 {
        return Ok(BigUint::one());
    }
    Ok(falling_product(
        n as u64 + k as u64,
        n as u64 + 2 * k as u64 - 1,
    ))
}

fn falling_product(lo: u64, hi: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut v = lo;
    while v <= hi {
        acc *= BigUint::from(v);
        v += 1;
    }
    acc
}

/// The counting recurrence unrolled over exact rationals, with no domain
/// restriction: beyond `k = n+1` the values lose combinatorial meaning and
/// may be negative or non-integer, but they agree with [`CountTable`] on
/// the combinatorial domain. This extension is what the generating-function
/// checks in [`crate::series`] are built on.
#[derive(Debug)]
pub struct ExtendedCounts {
    n_hi: usize,
    k_hi: usize,
    cols: Vec<Vec<BigRational>>, // cols[k][n], n up to n_hi + (k_hi - k)
}

impl ExtendedCounts {
    pub fn new(n_hi: usize, k_hi: usize) -> Self {
        let mut cols = Vec::with_capacity(k_hi + 1);
        cols.push(vec![BigRational::one(); n_hi + k_hi + 1]);
        for k in 1..=k_hi {
            let prev = cols.last().expect("previous column exists");
            let width = n_hi + (k_hi - k) + 1;
            let mut col = Vec::with_capacity(width);
            for n in 0..width {
                let a = BigRational::from_integer(BigInt::from(n as i64 + 2 * k as i64 - 1));
                let b = BigRational::from_integer(BigInt::from(n as i64 - k as i64));
                let two = BigRational::from_integer(BigInt::from(2));
                col.push((a * &prev[n] + b * &prev[n + 1]) / two);
            }
            cols.push(col);
        }
        ExtendedCounts { n_hi, k_hi, cols }
    }

    pub fn get(&self, n: usize, k: usize) -> &BigRational {
        assert!(
            k <= self.k_hi && n <= self.n_hi + (self.k_hi - k),
            "extended count ({n},{k}) outside the prepared range"
        );
        &self.cols[k][n]
    }
}

/// One-off evaluation of the extended recurrence.
pub fn runs_count_extended(n: u32, k: u32) -> BigRational {
    ExtendedCounts::new(n as usize, k as usize)
        .get(n as usize, k as usize)
        .clone()
}
