//! Closed-form evaluation of the run counts in exact arithmetic.
//!
//! The closed form expresses `t(n,k)` through double factorials, a parity
//! factor and ratios of Gamma values at half-integers. Every half-integer
//! Gamma value is expanded with `Gamma(p + 1/2) = ((2p-1)!!/2^p) sqrt(pi)`,
//! so the whole evaluation lives in `Q[sqrt(pi), 1/sqrt(pi)]`:
//! an [`ExactConstant`] is a single `q * pi^(h/2)` term, a [`PiSum`] is a
//! finite sum of them keyed by the exponent `h`.
//!
//! The formula is treated as a hypothesis under test, not ground truth:
//! the recurrence (validated by the brute-force oracle) is canonical, and
//! [`closed_form_report`] records agreement cell by cell. The evaluation
//! is known to agree for `k = 1` and to disagree for `k >= 2`, where the
//! sum acquires irrational residue terms; mismatches are reported, never
//! patched.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::counting::build_count_table;
use crate::{Error, Result};

/// An exact value `q * pi^(h/2)` with rational `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactConstant {
    q: BigRational,
    h: i64,
}

impl ExactConstant {
    pub fn new(q: BigRational, h: i64) -> Self {
        if q.is_zero() {
            ExactConstant { q, h: 0 }
        } else {
            ExactConstant { q, h }
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::new(q, 0)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(v)), 0)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.q
    }

    /// Exponent `h` in `pi^(h/2)`.
    pub fn pi_exponent(&self) -> i64 {
        self.h
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    /// A value is rational iff `h = 0`.
    pub fn is_rational(&self) -> bool {
        self.h == 0
    }

    pub fn mul(&self, other: &ExactConstant) -> ExactConstant {
        ExactConstant::new(&self.q * &other.q, self.h + other.h)
    }

    pub fn div(&self, other: &ExactConstant) -> ExactConstant {
        assert!(!other.q.is_zero(), "division by an exact zero");
        ExactConstant::new(&self.q / &other.q, self.h - other.h)
    }

    /// Addition is defined only between equal exponents (or with zero);
    /// anything else would leave `Q[sqrt(pi)]`'s single-term form.
    pub fn checked_add(&self, other: &ExactConstant) -> Result<ExactConstant> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.h != other.h {
            return Err(Error::Domain(format!(
                "cannot add exact constants with pi-exponents {} and {}",
                self.h, other.h
            )));
        }
        Ok(ExactConstant::new(&self.q + &other.q, self.h))
    }
}

impl fmt::Display for ExactConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.h == 0 {
            return write!(f, "{}", self.q);
        }
        let q = if self.q.is_one() {
            String::new()
        } else {
            format!("{}*", self.q)
        };
        match self.h {
            2 => write!(f, "{q}pi"),
            h if h % 2 == 0 => write!(f, "{q}pi^{}", h / 2),
            h => write!(f, "{q}pi^({h}/2)"),
        }
    }
}

/// A finite sum of [`ExactConstant`] terms with pairwise distinct
/// exponents. Since `pi` is transcendental the representation is canonical:
/// the sum is zero iff it has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PiSum {
    terms: BTreeMap<i64, BigRational>,
}

impl PiSum {
    pub fn zero() -> Self {
        PiSum::default()
    }

    pub fn from_constant(c: ExactConstant) -> Self {
        let mut s = PiSum::zero();
        s.add_constant(c);
        s
    }

    pub fn from_integer(v: BigInt) -> Self {
        Self::from_constant(ExactConstant::from_rational(BigRational::from_integer(v)))
    }

    pub fn add_constant(&mut self, c: ExactConstant) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(c.h).or_insert_with(BigRational::zero);
        *entry += c.q;
        if entry.is_zero() {
            self.terms.remove(&c.h);
        }
    }

    pub fn sub(&self, other: &PiSum) -> PiSum {
        let mut out = self.clone();
        for (&h, q) in &other.terms {
            out.add_constant(ExactConstant::new(-q.clone(), h));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value when the sum has no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Largest exponent carrying a nonzero term.
    pub fn leading_pi_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = ExactConstant> + '_ {
        self.terms
            .iter()
            .map(|(&h, q)| ExactConstant::new(q.clone(), h))
    }
}

impl fmt::Display for PiSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Double factorial with `0!! = 1!! = 1`.
pub fn double_factorial(m: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut v = m;
    while v >= 2 {
        acc *= BigUint::from(v);
        v -= 2;
    }
    acc
}

pub fn factorial(m: u64) -> BigUint {
    let mut acc = BigUint::one();
    for v in 2..=m {
        acc *= BigUint::from(v);
    }
    acc
}

/// `Gamma(m/2 + 1)` for integer `m >= -1`: `(m/2)!` when `m` is even,
/// `(m!!/2^((m+1)/2)) sqrt(pi)` when `m` is odd.
fn gamma_half(m: i64) -> ExactConstant {
    assert!(m >= -1, "gamma_half is defined for m >= -1");
    if m % 2 == 0 {
        ExactConstant::from_rational(BigRational::from_integer(BigInt::from(factorial(
            (m / 2) as u64,
        ))))
    } else {
        let df = if m == -1 {
            BigUint::one()
        } else {
            double_factorial(m as u64)
        };
        let pow = BigInt::one() << (((m + 1) / 2) as usize);
        ExactConstant::new(BigRational::new(BigInt::from(df), pow), 1)
    }
}

/// The parity factor of the closed form.
fn parity_factor(n: u32, s: u32) -> ExactConstant {
    let half_pow = |e: u32| BigRational::new(BigInt::one(), BigInt::one() << (e as usize));
    if s.is_multiple_of(2) {
        ExactConstant::new(half_pow(s / 2), 0)
    } else if n.is_multiple_of(2) {
        ExactConstant::new(half_pow(s.div_ceil(2)), 1)
    } else {
        ExactConstant::new(half_pow((s - 1) / 2), -1)
    }
}

/// Evaluates the closed form for `t(n,k)` exactly, for `0 < k <= n+1`.
///
/// The outer factor is `(2k+n-1)!!/2^(k-1)`; each `s` in `0..k` contributes
/// `(n+s) par(n,s)/(n+s+1)!!` times the sum over increasing index sequences
/// `1 <= i_1 < … < i_s <= k` of the product of
/// `(i_j + j + n - k - 1) * Gamma((2k+n-2i_j+j)/2 + 1)/Gamma((2k+n-2i_j+j+1)/2 + 1)`
/// (the empty sequence contributes 1 at `s = 0`). The inner sum is computed
/// by dynamic programming over (last index, sequence length) rather than
/// enumerating the `2^k` subsets; within one length every product carries
/// the same pi-exponent, so each DP layer stays a plain rational array.
///
/// The terms of the outer sum do *not* all share one exponent, which is why
/// this returns a [`PiSum`] rather than a single [`ExactConstant`].
pub fn closed_form(n: u32, k: u32) -> Result<PiSum> {
    if k == 0 {
        return Err(Error::Domain(
            "the closed form starts at k >= 1".to_string(),
        ));
    }
    if (k as u64) > (n as u64) + 1 {
        return Err(Error::InvalidShape { n, k });
    }
    let n64 = n as i64;
    let k64 = k as i64;

    let outer = ExactConstant::new(
        BigRational::new(
            BigInt::from(double_factorial((2 * k64 + n64 - 1) as u64)),
            BigInt::one() << ((k - 1) as usize),
        ),
        0,
    );

    // f(i, j): the factor a sequence contributes when its j-th index is i
    let factor = |i: i64, j: i64| -> ExactConstant {
        let a = 2 * k64 + n64 - 2 * i + j;
        let linear = ExactConstant::from_integer(i + j + n64 - k64 - 1);
        linear.mul(&gamma_half(a).div(&gamma_half(a + 1)))
    };

    // layer[i-1] = sum over increasing sequences of the current length
    // ending exactly at i; every entry shares the layer's pi-exponent.
    let mut inner_sums: Vec<ExactConstant> = Vec::with_capacity(k as usize);
    inner_sums.push(ExactConstant::from_integer(1)); // s = 0: empty sequence
    let mut layer: Vec<ExactConstant> = Vec::new();
    for j in 1..=k64 - 1 {
        let mut next = Vec::with_capacity(k as usize);
        // running sum of the previous layer over indices strictly below i
        let mut acc = ExactConstant::from_integer(0);
        for i in 1..=k64 {
            let prefix = if j == 1 {
                ExactConstant::from_integer(1)
            } else {
                acc.clone()
            };
            next.push(factor(i, j).mul(&prefix));
            if j > 1 {
                acc = acc.checked_add(&layer[(i - 1) as usize])?;
            }
        }
        let mut total = ExactConstant::from_integer(0);
        for v in &next {
            total = total.checked_add(v)?;
        }
        inner_sums.push(total);
        layer = next;
    }

    let mut result = PiSum::zero();
    for s in 0..k {
        let weight = ExactConstant::new(
            BigRational::new(
                BigInt::from(n64 + s as i64),
                BigInt::from(double_factorial((n64 + s as i64 + 1) as u64)),
            ),
            0,
        )
        .mul(&parity_factor(n, s));
        result.add_constant(outer.mul(&weight).mul(&inner_sums[s as usize]));
    }
    Ok(result)
}

/// One cell of the crosscheck between the closed form and the recurrence.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormRow {
    pub n: u32,
    pub k: u32,
    pub formula: String,
    pub recurrence: String,
    pub matches: bool,
    /// Leading pi-exponent of `formula - recurrence` when they differ.
    pub residual_pi_exponent: Option<i64>,
}

/// Machine-readable crosscheck over every in-domain cell of a rectangle.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormReport {
    pub n_max: u32,
    pub k_max: u32,
    pub rows: Vec<ClosedFormRow>,
    pub first_mismatch: Option<(u32, u32)>,
}

pub fn closed_form_report(n_max: u32, k_max: u32) -> ClosedFormReport {
    let mut rows = Vec::new();
    let mut first_mismatch = None;
    for n in 0..=n_max {
        for k in 1..=k_max.min(n + 1) {
            let value = closed_form(n, k).expect("in-domain cell");
            let exact = build_count_table(n, k)
                .expect("in-domain cell")
                .total()
                .clone();
            let reference = PiSum::from_integer(BigInt::from(exact.clone()));
            let residual = value.sub(&reference);
            let matches = residual.is_zero();
            if !matches && first_mismatch.is_none() {
                first_mismatch = Some((n, k));
            }
            rows.push(ClosedFormRow {
                n,
                k,
                formula: value.to_string(),
                recurrence: exact.to_string(),
                matches,
                residual_pi_exponent: residual.leading_pi_exponent(),
            });
        }
    }
    ClosedFormReport {
        n_max,
        k_max,
        rows,
        first_mismatch,
    }
}

impl fmt::Display for ClosedFormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "closed-form crosscheck up to n={}, k={}",
            self.n_max, self.k_max
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "  ({},{}) {} formula={} recurrence={}",
                r.n,
                r.k,
                if r.matches { "match   " } else { "MISMATCH" },
                r.formula,
                r.recurrence
            )?;
        }
        match self.first_mismatch {
            Some((n, k)) => writeln!(f, "first mismatch at ({n},{k})"),
            None => writeln!(f, "all cells match"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn double_factorial_values() {
        let v: Vec<u64> = (0..8)
            .map(|m| {
                use num_traits::ToPrimitive;
                double_factorial(m).to_u64().unwrap()
            })
            .collect();
        assert_eq!(v, vec![1, 1, 2, 3, 8, 15, 48, 105]);
    }

    #[test]
    fn gamma_half_values() {
        // Gamma(1/2) = sqrt(pi)
        assert_eq!(gamma_half(-1), ExactConstant::new(BigRational::one(), 1));
        // Gamma(1) = 1, Gamma(2) = 1, Gamma(3) = 2
        assert_eq!(gamma_half(0), ExactConstant::from_integer(1));
        assert_eq!(gamma_half(2), ExactConstant::from_integer(1));
        assert_eq!(gamma_half(4), ExactConstant::from_integer(2));
        // Gamma(5/2) = (3/4) sqrt(pi)
        assert_eq!(
            gamma_half(3),
            ExactConstant::new(BigRational::new(3.into(), 4.into()), 1)
        );
    }

    #[test]
    fn exact_constant_arithmetic() {
        let a = ExactConstant::new(BigRational::from_i64(3).unwrap(), 1);
        let b = ExactConstant::new(BigRational::from_i64(2).unwrap(), 1);
        assert_eq!(
            a.checked_add(&b).unwrap(),
            ExactConstant::new(BigRational::from_i64(5).unwrap(), 1)
        );
        assert_eq!(
            a.mul(&b),
            ExactConstant::new(BigRational::from_i64(6).unwrap(), 2)
        );
        let c = ExactConstant::from_integer(1);
        assert!(a.checked_add(&c).is_err());
        assert!(a.checked_add(&ExactConstant::from_integer(0)).is_ok());
    }

    #[test]
    fn closed_form_k1_is_n() {
        for n in 1..=20u32 {
            let v = closed_form(n, 1).unwrap();
            assert_eq!(
                v.as_rational(),
                Some(BigRational::from_u64(n as u64).unwrap()),
                "closed_form({n},1)"
            );
        }
        // (1,1) -> 1 and (3,1) -> 3, both purely rational
        assert_eq!(closed_form(1, 1).unwrap().to_string(), "1");
        assert_eq!(closed_form(3, 1).unwrap().to_string(), "3");
    }

    #[test]
    fn closed_form_domain() {
        assert!(closed_form(3, 0).is_err());
        assert!(closed_form(2, 4).is_err());
        assert!(closed_form(1, 2).is_ok()); // merged case is in the stated domain
    }

    #[test]
    fn report_shape_and_k1_column() {
        let report = closed_form_report(6, 4);
        assert!(report.rows.iter().filter(|r| r.k == 1).all(|r| r.matches));
        // the known disagreement from k = 2 on is recorded, not patched
        let cell = report
            .rows
            .iter()
            .find(|r| r.n == 2 && r.k == 2)
            .expect("cell present");
        assert!(!cell.matches);
        assert_eq!(cell.recurrence, "5");
        assert!(serde_json::to_string(&report).is_ok());
    }

    #[test]
    fn mismatch_residual_is_irrational_for_2_2() {
        // the s = 0 term alone already accounts for the full count 5;
        // the s = 1 term adds 765/512 * pi on top
        let v = closed_form(2, 2).unwrap();
        let residual = v.sub(&PiSum::from_integer(5.into()));
        assert!(!residual.is_zero());
        assert_eq!(residual.leading_pi_exponent(), Some(2));
        assert_eq!(
            residual.to_string(),
            format!("{}*pi", BigRational::new(765.into(), 512.into()))
        );
    }
}
