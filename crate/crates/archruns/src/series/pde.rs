//! The holonomic identity satisfied by the bivariate run-count series.
//!
//! With `A` the bivariate series and `C(u)` its initial-condition series,
//!
//! ```text
//! (2zu - 2z - u) dA/du + (z - 2) A + z(z + 1) dA/dz + C(u) = 0
//! ```
//!
//! holds coefficientwise; expanding it reproduces the counting recurrence,
//! with the `C(u)` term cancelling the `z^0` column. The residual here is
//! computed by generic series operations, so it also works as a corruption
//! detector on arbitrary bivariate data.

use super::build::{a_series, c_series_from};
use super::BiSeries;

/// Residual of the holonomic identity on an arbitrary bivariate series.
/// The result is defined on the sub-rectangle where every contribution is
/// determined by the input truncation (one order less in each variable).
pub fn pde_residual_of(a: &BiSeries) -> BiSeries {
    let da_u = a.du();
    let da_z = a.dz();

    // (2zu - 2z - u) dA/du
    let term_u = da_u
        .shift(1, 1)
        .scale_int(2)
        .add(&da_u.shift(1, 0).scale_int(-2))
        .add(&da_u.shift(0, 1).scale_int(-1));
    // (z - 2) A
    let term_a = a.shift(1, 0).add(&a.scale_int(-2));
    // z(z+1) dA/dz
    let term_z = da_z.shift(2, 0).add(&da_z.shift(1, 0));
    // C(u) as the z^0 row
    let c = c_series_from(a);
    let mut c_bi = BiSeries::zero(a.z_order(), a.u_order());
    for (k, v) in c.coeffs().iter().enumerate() {
        *c_bi.coeff_mut(0, k) = v.clone();
    }

    term_u.add(&term_a).add(&term_z).add(&c_bi)
}

/// Residual of the holonomic identity for the run-count series truncated
/// at `order`; identically zero on its determined region.
pub fn pde_residual(order: usize) -> BiSeries {
    pde_residual_of(&a_series(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    #[test]
    fn residual_vanishes() {
        for order in 2..=20 {
            let r = pde_residual(order);
            assert_eq!(r.z_order(), order - 1);
            assert_eq!(r.u_order(), order - 1);
            assert!(
                r.is_zero(),
                "order {order}: first nonzero {:?}",
                r.first_nonzero()
            );
        }
    }

    #[test]
    fn z0_column_cancels_by_construction() {
        let r = pde_residual(7);
        for k in 0..=r.u_order() {
            assert!(r.coeff(0, k).is_zero());
        }
    }

    #[test]
    fn corrupted_series_is_detected() {
        let mut a = a_series(9);
        *a.coeff_mut(3, 2) += BigRational::one();
        let r = pde_residual_of(&a);
        assert!(!r.is_zero());
    }
}
