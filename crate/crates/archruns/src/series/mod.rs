//! Exact truncated power series and the generating-function checks built
//! on them.
//!
//! All arithmetic is over exact rationals; floating point enters only in
//! [`build::d0_closed_form`] comparisons. Operations shrink the truncation
//! order conservatively (a derivative in `u` loses the top `u`-order, a
//! sum is defined on the intersection), so every coefficient a series
//! claims to have is fully determined by the data it was built from.

pub mod build;
pub mod guess;
pub mod pde;
pub mod poly;
pub mod report;

use num_rational::BigRational;
use num_traits::Zero;

/// Truncated univariate series with exact rational coefficients;
/// `coeffs[i]` is the coefficient of `u^i`, valid through `u^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniSeries {
    coeffs: Vec<BigRational>,
}

impl UniSeries {
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty());
        UniSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        UniSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [BigRational] {
        &mut self.coeffs
    }

    /// Restriction to the first `order + 1` coefficients.
    pub fn truncate(&self, order: usize) -> UniSeries {
        assert!(order <= self.order());
        UniSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn add(&self, other: &UniSeries) -> UniSeries {
        let order = self.order().min(other.order());
        UniSeries {
            coeffs: (0..=order)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> UniSeries {
        UniSeries {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Product truncated to the smaller operand order.
    pub fn mul(&self, other: &UniSeries) -> UniSeries {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        UniSeries { coeffs }
    }

    /// `d/du`; the result is determined one order less deep.
    pub fn derivative(&self) -> UniSeries {
        assert!(
            self.order() >= 1,
            "cannot differentiate a constant-order series"
        );
        UniSeries {
            coeffs: (1..=self.order())
                .map(|i| &self.coeffs[i] * BigRational::from_integer(i.into()))
                .collect(),
        }
    }

    /// Multiplication by the monomial `u^j`, keeping the truncation order.
    pub fn shift(&self, j: usize) -> UniSeries {
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + j <= self.order() {
                coeffs[i + j] = c.clone();
            }
        }
        UniSeries { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<(usize, BigRational)> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| (i, self.coeffs[i].clone()))
    }

    /// Partial-sum evaluation at a float point.
    pub fn eval_f64(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        let mut p = 1.0;
        for c in &self.coeffs {
            acc += rational_to_f64(c) * p;
            p *= u;
        }
        acc
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // fall back through a scaled division for extreme components
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Rectangularly truncated bivariate series: `coeff(n, i)` is the
/// coefficient of `z^n u^i`, valid on `0..=z_order` x `0..=u_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    c: Vec<Vec<BigRational>>, // c[n][i]
}

impl BiSeries {
    pub fn from_rows(c: Vec<Vec<BigRational>>) -> Self {
        assert!(!c.is_empty() && !c[0].is_empty());
        let w = c[0].len();
        assert!(c.iter().all(|row| row.len() == w));
        BiSeries { c }
    }

    pub fn zero(z_order: usize, u_order: usize) -> Self {
        BiSeries {
            c: vec![vec![BigRational::zero(); u_order + 1]; z_order + 1],
        }
    }

    pub fn z_order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn u_order(&self) -> usize {
        self.c[0].len() - 1
    }

    pub fn coeff(&self, n: usize, i: usize) -> BigRational {
        self.c
            .get(n)
            .and_then(|row| row.get(i))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub(crate) fn coeff_mut(&mut self, n: usize, i: usize) -> &mut BigRational {
        &mut self.c[n][i]
    }

    /// The univariate slice at `z = 0`.
    pub fn z0_column(&self) -> UniSeries {
        UniSeries::from_coeffs(self.c[0].clone())
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let zo = self.z_order().min(other.z_order());
        let uo = self.u_order().min(other.u_order());
        BiSeries {
            c: (0..=zo)
                .map(|n| (0..=uo).map(|i| &self.c[n][i] + &other.c[n][i]).collect())
                .collect(),
        }
    }

    pub fn scale_int(&self, v: i64) -> BiSeries {
        let r = BigRational::from_integer(v.into());
        BiSeries {
            c: self
                .c
                .iter()
                .map(|row| row.iter().map(|x| x * &r).collect())
                .collect(),
        }
    }

    /// Product truncated to the intersection rectangle.
    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let zo = self.z_order().min(other.z_order());
        let uo = self.u_order().min(other.u_order());
        let mut out = BiSeries::zero(zo, uo);
        for n1 in 0..=zo {
            for i1 in 0..=uo {
                if self.c[n1][i1].is_zero() {
                    continue;
                }
                for n2 in 0..=zo - n1 {
                    for i2 in 0..=uo - i1 {
                        if other.c[n2][i2].is_zero() {
                            continue;
                        }
                        let t = &self.c[n1][i1] * &other.c[n2][i2];
                        *out.coeff_mut(n1 + n2, i1 + i2) += t;
                    }
                }
            }
        }
        out
    }

    /// `d/du`; one `u`-order shallower.
    pub fn du(&self) -> BiSeries {
        assert!(self.u_order() >= 1);
        BiSeries {
            c: self
                .c
                .iter()
                .map(|row| {
                    (1..row.len())
                        .map(|i| &row[i] * BigRational::from_integer(i.into()))
                        .collect()
                })
                .collect(),
        }
    }

    /// `d/dz`; one `z`-order shallower.
    pub fn dz(&self) -> BiSeries {
        assert!(self.z_order() >= 1);
        BiSeries {
            c: (1..self.c.len())
                .map(|n| {
                    self.c[n]
                        .iter()
                        .map(|x| x * BigRational::from_integer(n.into()))
                        .collect()
                })
                .collect(),
        }
    }

    /// Multiplication by `z^a u^b`, keeping the truncation rectangle.
    pub fn shift(&self, a: usize, b: usize) -> BiSeries {
        let mut out = BiSeries::zero(self.z_order(), self.u_order());
        for n in 0..=self.z_order() {
            for i in 0..=self.u_order() {
                if n + a <= self.z_order() && i + b <= self.u_order() && !self.c[n][i].is_zero() {
                    *out.coeff_mut(n + a, i + b) = self.c[n][i].clone();
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|row| row.iter().all(Zero::is_zero))
    }

    /// First nonzero coefficient in lexicographic `(n, i)` order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, BigRational)> {
        for (n, row) in self.c.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    return Some((n, i, v.clone()));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn uni_ops() {
        // (1 + u)^2 = 1 + 2u + u^2
        let s = UniSeries::from_coeffs(vec![rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1)]);
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(0), rat(1, 1));
        assert_eq!(sq.coeff(1), rat(2, 1));
        assert_eq!(sq.coeff(2), rat(1, 1));
        assert_eq!(sq.coeff(3), rat(0, 1));

        let d = s.derivative();
        assert_eq!(d.order(), 2);
        assert_eq!(d.coeff(0), rat(1, 1));

        let sh = s.shift(2);
        assert_eq!(sh.coeff(2), rat(1, 1));
        assert_eq!(sh.coeff(3), rat(1, 1));
        assert_eq!(sh.coeff(0), rat(0, 1));
    }

    #[test]
    fn geometric_series_inverse_check() {
        // S = sum u^i satisfies (1 - u) S = 1 through the truncation order
        let order = 10;
        let s = UniSeries::from_coeffs(vec![BigRational::one(); order + 1]);
        let lhs = s.add(&s.shift(1).scale(&rat(-1, 1)));
        assert_eq!(lhs.first_nonzero(), Some((0, rat(1, 1))));
        assert!(lhs
            .add(&UniSeries {
                coeffs: {
                    let mut v = vec![BigRational::zero(); order + 1];
                    v[0] = rat(-1, 1);
                    v
                }
            })
            .is_zero());
    }

    #[test]
    fn bi_ops() {
        // f = 1 + z u
        let mut f = BiSeries::zero(3, 3);
        *f.coeff_mut(0, 0) = rat(1, 1);
        *f.coeff_mut(1, 1) = rat(1, 1);
        let sq = f.mul(&f);
        assert_eq!(sq.coeff(2, 2), rat(1, 1));
        assert_eq!(sq.coeff(1, 1), rat(2, 1));
        let du = f.du();
        assert_eq!(du.coeff(1, 0), rat(1, 1));
        assert_eq!(du.u_order(), 2);
        let dz = f.dz();
        assert_eq!(dz.coeff(0, 1), rat(1, 1));
        let sh = f.shift(1, 0);
        assert_eq!(sh.coeff(1, 0), rat(1, 1));
        assert_eq!(sh.coeff(2, 1), rat(1, 1));
    }
}
