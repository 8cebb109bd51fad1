//! Guessing an annihilating polynomial from series coefficients.
//!
//! Sets up the exact homogeneous linear system forcing
//! `sum p_{a,b} u^b Y^a (series) = 0` through the available truncation
//! order and extracts a primitive integer kernel vector. Any candidate is
//! re-verified through [`poly_residual_uni`] before being returned;
//! absence of a relation is a value, not an error.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{poly_residual_uni, SeriesPoly, Term};
use super::UniSeries;

/// Looks for a nonzero `P(Y, u)` with `deg_Y <= d_y`, `deg_u <= d_u` and
/// `P(series, u) = 0` through the series order. Needs at least
/// `(d_y+1)(d_u+1) + 5` coefficients; returns `None` when the data is
/// insufficient or no relation exists at these degrees.
pub fn guess_algebraic(series: &UniSeries, d_y: u32, d_u: u32) -> Option<SeriesPoly> {
    let unknowns = (d_y as usize + 1) * (d_u as usize + 1);
    let rows = series.order() + 1;
    if rows < unknowns + 5 {
        return None;
    }

    // powers of the series, each valid through the full order
    let mut powers: Vec<UniSeries> = Vec::with_capacity(d_y as usize + 1);
    let mut one = UniSeries::zero(series.order());
    one.coeffs_mut()[0] = BigRational::one();
    powers.push(one);
    for _ in 0..d_y {
        powers.push(powers.last().expect("non-empty").mul(series));
    }

    // matrix[m][col]: coefficient of u^m in u^b * S^a, col = a*(d_u+1) + b
    let mut matrix: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    for m in 0..rows {
        let mut row = Vec::with_capacity(unknowns);
        for power in &powers {
            for b in 0..=d_u as usize {
                row.push(if b <= m {
                    power.coeff(m - b)
                } else {
                    BigRational::zero()
                });
            }
        }
        matrix.push(row);
    }

    let kernel = kernel_vector(matrix, unknowns)?;

    // scale to a primitive integer vector
    let mut lcm = BigInt::one();
    for q in &kernel {
        lcm = lcm.lcm(q.denom());
    }
    let ints: Vec<BigInt> = kernel.iter().map(|q| (q * &lcm).to_integer()).collect();
    let mut gcd = BigInt::zero();
    for v in &ints {
        gcd = gcd.gcd(v);
    }
    let sign_fix = ints.iter().rev().find(|v| !v.is_zero()).map(|v| {
        if v.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    })?;
    let scale = gcd * sign_fix;

    let mut terms = Vec::new();
    for a in 0..=d_y as usize {
        for b in 0..=d_u as usize {
            let c = &ints[a * (d_u as usize + 1) + b] / &scale;
            if !c.is_zero() {
                terms.push(Term {
                    y: a as u32,
                    z: 0,
                    u: b as u32,
                    c,
                });
            }
        }
    }
    let poly = SeriesPoly::from_terms(terms);
    if poly_residual_uni(series, &poly).is_clean() {
        Some(poly)
    } else {
        None
    }
}

/// One nonzero kernel vector of the column space, or `None` when the
/// system has full column rank.
#[allow(clippy::needless_range_loop)] // row/column indices mirror the math
fn kernel_vector(mut m: Vec<Vec<BigRational>>, cols: usize) -> Option<Vec<BigRational>> {
    let rows = m.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for c in col..cols {
            let v = &m[rank][c] * &inv;
            m[rank][c] = v;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..cols {
                    let v = &m[r][c] - &f * &m[rank][c];
                    m[r][c] = v;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let free = (0..cols).find(|&c| pivot_of_col[c].is_none())?;
    let mut x = vec![BigRational::zero(); cols];
    x[free] = BigRational::one();
    for col in 0..cols {
        if let Some(r) = pivot_of_col[col] {
            x[col] = -m[r][free].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::build::diagonal_series;
    use rand_chacha::rand_core::{RngCore, SeedableRng};

    #[test]
    fn recovers_planted_linear_relation() {
        // geometric series: (1 - u) Y - 1 = 0
        let s = UniSeries::from_coeffs(vec![BigRational::one(); 16]);
        let p = guess_algebraic(&s, 1, 1).expect("relation exists");
        let hits: Vec<String> = p
            .terms()
            .iter()
            .map(|t| format!("{}:{}:{}", t.y, t.u, t.c))
            .collect();
        // (1-u)Y - 1 up to global sign
        assert!(
            hits == vec!["0:0:-1", "1:0:1", "1:1:-1"] || hits == vec!["0:0:1", "1:0:-1", "1:1:1"],
            "{hits:?}"
        );
    }

    #[test]
    fn main_diagonal_is_cubic() {
        let d0 = diagonal_series(0, 30);
        let p = guess_algebraic(&d0, 3, 3).expect("cubic relation");
        assert!(p.degree_y() == 3);
        assert!(poly_residual_uni(&d0, &p).is_clean());
        // and the guess generalizes: fit on a prefix, verify on more terms
        let shorter = d0.truncate(22);
        let p2 = guess_algebraic(&shorter, 3, 3).expect("cubic relation on prefix");
        assert!(poly_residual_uni(&d0, &p2).is_clean());
    }

    #[test]
    fn insufficient_data_is_none() {
        let s = UniSeries::from_coeffs(vec![BigRational::one(); 5]);
        assert!(guess_algebraic(&s, 3, 3).is_none());
    }

    #[test]
    fn random_series_has_no_small_relation() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let coeffs: Vec<BigRational> = (0..30)
            .map(|_| BigRational::from_integer(((rng.next_u32() % 2000) as i64 - 1000).into()))
            .collect();
        let s = UniSeries::from_coeffs(coeffs);
        assert!(guess_algebraic(&s, 2, 2).is_none());
        assert!(guess_algebraic(&s, 3, 3).is_none());
    }
}
