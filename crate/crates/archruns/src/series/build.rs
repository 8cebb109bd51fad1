//! Construction of the run-count generating series.
//!
//! The bivariate series is exponential in `u` and ordinary in `z`:
//! coefficient of `z^n u^k` is `t(n,k)/k!`, with `t` extended past the
//! combinatorial domain by the recurrence over exact rationals. Diagonals
//! are built straight from the same extended table rather than through a
//! substitution, so their coefficients provably match the count tables.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::closed_form::factorial;
use crate::counting::ExtendedCounts;
use crate::{Error, Result};

use super::{rational_to_f64, BiSeries, UniSeries};

/// The bivariate series through `z^order u^order`.
pub fn a_series(order: usize) -> BiSeries {
    let ext = ExtendedCounts::new(order, order);
    let rows = (0..=order)
        .map(|n| {
            (0..=order)
                .map(|k| {
                    ext.get(n, k) / BigRational::from_integer(BigInt::from(factorial(k as u64)))
                })
                .collect()
        })
        .collect();
    BiSeries::from_rows(rows)
}

/// The `z = 0` slice, built directly.
pub fn a0_series(order: usize) -> UniSeries {
    let ext = ExtendedCounts::new(0, order);
    UniSeries::from_coeffs(
        (0..=order)
            .map(|k| ext.get(0, k) / BigRational::from_integer(BigInt::from(factorial(k as u64))))
            .collect(),
    )
}

/// The initial-condition series `C(u) = u d/du A(0,u) + 2 A(0,u)`;
/// its `u^k` coefficient is `(k+2) t(0,k)/k!`.
pub fn c_series(order: usize) -> UniSeries {
    let a0 = a0_series(order);
    UniSeries::from_coeffs(
        (0..=order)
            .map(|k| a0.coeff(k) * BigRational::from_integer(BigInt::from(k as i64 + 2)))
            .collect(),
    )
}

/// Same construction from an existing bivariate series (used to check that
/// a corrupted series fails the holonomic identity).
pub fn c_series_from(a: &BiSeries) -> UniSeries {
    UniSeries::from_coeffs(
        (0..=a.u_order())
            .map(|k| a.coeff(0, k) * BigRational::from_integer(BigInt::from(k as i64 + 2)))
            .collect(),
    )
}

/// Diagonal series `D_i(u) = sum_k t(k+i, k)/k! u^k` for `i >= -1`.
/// Terms with `k + i < 0` are absent.
pub fn diagonal_series(i: i32, order: usize) -> UniSeries {
    assert!(i >= -1, "diagonals are defined for i >= -1");
    let n_hi = order + i.max(0) as usize;
    let ext = ExtendedCounts::new(n_hi, order);
    UniSeries::from_coeffs(
        (0..=order)
            .map(|k| {
                let n = k as i64 + i as i64;
                if n < 0 {
                    BigRational::from_integer(0.into())
                } else {
                    ext.get(n as usize, k)
                        / BigRational::from_integer(BigInt::from(factorial(k as u64)))
                }
            })
            .collect(),
    )
}

/// Closed form of the main diagonal's generating function on `(0, rho)`:
///
/// ```text
/// sqrt(2) sqrt((1-3u)/(1-3u-(9/4)u^2))
///   * cos( (1/3) arccos( (6u-1)/(sqrt(2)(1-3u))
///          * sqrt((1-3u-(9/4)u^2)/(1-3u)) ) )
/// ```
///
/// The branch is the one analytic at 0, where the value tends to 1.
pub fn d0_closed_form(u: f64) -> Result<f64> {
    let rho = crate::asympt::dominant_singularity();
    if !(u > 0.0 && u < rho) {
        return Err(Error::Domain(format!(
            "d0_closed_form is defined on (0, {rho:.6}), got {u}"
        )));
    }
    let one_3u = 1.0 - 3.0 * u;
    let disc = 1.0 - 3.0 * u - 2.25 * u * u;
    let arg = ((6.0 * u - 1.0) / (std::f64::consts::SQRT_2 * one_3u)) * (disc / one_3u).sqrt();
    let arg = arg.clamp(-1.0, 1.0); // guard float drift at the edges
    Ok(std::f64::consts::SQRT_2 * (one_3u / disc).sqrt() * ((arg.acos()) / 3.0).cos())
}

/// Partial sum of `D_0` at a float point, for comparisons.
pub fn d0_partial_sum(u: f64, terms: usize) -> f64 {
    let d0 = diagonal_series(0, terms);
    let mut acc = 0.0;
    let mut p = 1.0;
    for k in 0..=terms {
        acc += rational_to_f64(&d0.coeff(k)) * p;
        p *= u;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::build_count_table;
    use num_traits::{One, Signed, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn a_series_known_coefficients() {
        let a = a_series(6);
        assert_eq!(a.coeff(0, 0), BigRational::one());
        assert_eq!(a.coeff(0, 2), rat(-1, 2));
        assert_eq!(a.coeff(5, 4), rat(1270, 24));
    }

    #[test]
    fn c_series_known_coefficients() {
        let c = c_series(6);
        assert_eq!(c.coeff(0), rat(2, 1));
        assert_eq!(c.coeff(1), rat(0, 1));
        assert_eq!(c.coeff(2), rat(-2, 1));
    }

    #[test]
    fn diagonal_series_match_reference_values() {
        // D0 starts 1 + u + (5/2)u^2 + (44/6)u^3
        let d0 = diagonal_series(0, 5);
        assert_eq!(d0.coeff(0), rat(1, 1));
        assert_eq!(d0.coeff(1), rat(1, 1));
        assert_eq!(d0.coeff(2), rat(5, 2));
        assert_eq!(d0.coeff(3), rat(44, 6));

        // D1 starts 1 + 2u + (11/2)u^2
        let d1 = diagonal_series(1, 4);
        assert_eq!(d1.coeff(0), rat(1, 1));
        assert_eq!(d1.coeff(1), rat(2, 1));
        assert_eq!(d1.coeff(2), rat(11, 2));

        // D_{-1} starts at u^2 with t(1,2)/2! = 1/2
        let dm1 = diagonal_series(-1, 4);
        assert_eq!(dm1.coeff(0), rat(0, 1));
        assert_eq!(dm1.coeff(1), rat(0, 1));
        assert_eq!(dm1.coeff(2), rat(1, 2));
    }

    #[test]
    fn diagonal_series_cohere_with_count_tables() {
        for i in [-1i32, 0, 1, 2] {
            let d = diagonal_series(i, 9);
            for k in 0..=9usize {
                let n = k as i64 + i as i64;
                if n < 0 {
                    assert!(d.coeff(k).is_zero());
                    continue;
                }
                let v = d.coeff(k) * BigRational::from_integer(BigInt::from(factorial(k as u64)));
                assert!(v.is_integer());
                let t = build_count_table(n as u32, k as u32)
                    .unwrap()
                    .total()
                    .clone();
                assert_eq!(v.to_integer().to_biguint().unwrap(), t);
            }
        }
    }

    #[test]
    fn d0_closed_form_limits() {
        // continuous limit at 0+ is 1
        assert!((d0_closed_form(1e-9).unwrap() - 1.0).abs() < 1e-6);
        // agreement with the exact partial sums well inside the disk
        for u in [0.05, 0.1, 0.15] {
            let exact = d0_partial_sum(u, 60);
            let cf = d0_closed_form(u).unwrap();
            assert!((cf - exact).abs() < 1e-9, "u={u}: {cf} vs {exact}");
        }
        // singular growth: near rho the function exceeds a short partial sum
        let cf = d0_closed_form(0.25).unwrap();
        assert!(cf.is_finite());
        assert!(cf > d0_partial_sum(0.25, 20));
        // domain errors
        assert!(d0_closed_form(0.0).is_err());
        assert!(d0_closed_form(0.3).is_err());
    }

    #[test]
    fn extension_is_integral_in_domain_and_signed_off_domain() {
        // whether the extension stays integral off-domain is an open point;
        // what must hold is integrality in-domain and e.g. t(0,2) = -1
        let a = a_series(8);
        let mut saw_negative = false;
        for n in 0..=8usize {
            for k in 0..=8usize {
                let c =
                    a.coeff(n, k) * BigRational::from_integer(BigInt::from(factorial(k as u64)));
                if k as i64 <= n as i64 + 1 {
                    assert!(c.is_integer(), "non-integer in-domain at ({n},{k})");
                    assert!(!c.is_negative());
                } else if c.is_negative() {
                    saw_negative = true;
                }
            }
        }
        assert!(saw_negative, "the extension goes negative off-domain");
    }
}
