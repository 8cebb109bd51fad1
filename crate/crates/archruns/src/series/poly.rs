//! Annihilating polynomials and linear ODEs as data, plus exact residual
//! evaluation.
//!
//! A [`SeriesPoly`] is a polynomial in an unknown series `Y` with integer
//! polynomial coefficients in `z` and `u`; substituting a truncated series
//! for `Y` and expanding exactly either vanishes through the determined
//! region ("clean") or pinpoints the first nonzero order. The catalog
//! returns the five displayed equations satisfied (or claimed to be
//! satisfied) by the run-count generating functions; each printed equation
//! is a hypothesis with a status, never an assumption.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{BiSeries, UniSeries};

/// One monomial `c * Y^y z^z u^u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub y: u32,
    pub z: u32,
    pub u: u32,
    pub c: BigInt,
}

/// Polynomial in an unknown series `Y` over `Z[z, u]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPoly {
    terms: Vec<Term>,
}

impl SeriesPoly {
    pub fn from_terms(terms: Vec<Term>) -> Self {
        SeriesPoly { terms }
    }

    /// Builds `sum_i coeff_i(z,u) * Y^i` from per-power coefficient lists
    /// of `(z_degree, u_degree, constant)` triples.
    pub fn from_coefficients(coeffs: &[Vec<(u32, u32, i64)>]) -> Self {
        let mut terms = Vec::new();
        for (y, list) in coeffs.iter().enumerate() {
            for &(z, u, c) in list {
                if c != 0 {
                    terms.push(Term {
                        y: y as u32,
                        z,
                        u,
                        c: BigInt::from(c),
                    });
                }
            }
        }
        SeriesPoly { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.iter().map(|t| t.y).max().unwrap_or(0)
    }

    pub fn degree_u(&self) -> u32 {
        self.terms.iter().map(|t| t.u).max().unwrap_or(0)
    }

    pub fn is_univariate(&self) -> bool {
        self.terms.iter().all(|t| t.z == 0)
    }

    /// Restriction to `z = 0` (drops every term with a positive `z` power).
    pub fn slice_z0(&self) -> SeriesPoly {
        SeriesPoly {
            terms: self.terms.iter().filter(|t| t.z == 0).cloned().collect(),
        }
    }

    /// Exact value at a rational point, for spot checks.
    pub fn eval(&self, y: &BigRational, z: &BigRational, u: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for t in &self.terms {
            let mut v = BigRational::from_integer(t.c.clone());
            for _ in 0..t.y {
                v *= y;
            }
            for _ in 0..t.z {
                v *= z;
            }
            for _ in 0..t.u {
                v *= u;
            }
            acc += v;
        }
        acc
    }

    /// Residual series of substituting a univariate series for `Y`.
    /// Panics if the polynomial mentions `z`.
    pub fn residual_uni(&self, s: &UniSeries) -> UniSeries {
        assert!(
            self.is_univariate(),
            "univariate residual of a z-dependent polynomial"
        );
        let order = s.order();
        let powers = series_powers_uni(s, self.degree_y());
        let mut acc = UniSeries::zero(order);
        for t in &self.terms {
            let c = BigRational::from_integer(t.c.clone());
            acc = acc.add(&powers[t.y as usize].shift(t.u as usize).scale(&c));
        }
        acc
    }

    /// Residual series of substituting a bivariate series for `Y`.
    pub fn residual_bi(&self, s: &BiSeries) -> BiSeries {
        let (zo, uo) = (s.z_order(), s.u_order());
        let mut powers = Vec::with_capacity(self.degree_y() as usize + 1);
        let mut one = BiSeries::zero(zo, uo);
        *one.coeff_mut(0, 0) = BigRational::one();
        powers.push(one);
        for _ in 0..self.degree_y() {
            powers.push(powers.last().expect("non-empty").mul(s));
        }
        let mut acc = BiSeries::zero(zo, uo);
        for t in &self.terms {
            let shifted = powers[t.y as usize].shift(t.z as usize, t.u as usize);
            let mut scaled = shifted;
            for row in 0..=zo {
                for col in 0..=uo {
                    let v = scaled.coeff(row, col) * BigRational::from_integer(t.c.clone());
                    *scaled.coeff_mut(row, col) = v;
                }
            }
            acc = acc.add(&scaled);
        }
        acc
    }
}

fn series_powers_uni(s: &UniSeries, max_pow: u32) -> Vec<UniSeries> {
    let mut powers = Vec::with_capacity(max_pow as usize + 1);
    let mut one = UniSeries::zero(s.order());
    one.coeffs_mut()[0] = BigRational::one();
    powers.push(one);
    for _ in 0..max_pow {
        powers.push(powers.last().expect("non-empty").mul(s));
    }
    powers
}

impl fmt::Display for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", t.c)?;
            if t.z > 0 {
                write!(f, "*z^{}", t.z)?;
            }
            if t.u > 0 {
                write!(f, "*u^{}", t.u)?;
            }
            if t.y > 0 {
                write!(f, "*Y^{}", t.y)?;
            }
        }
        Ok(())
    }
}

/// Outcome of a residual check on the determined region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Zero everywhere it is determined; `through` names the last checked order.
    Clean { through: Vec<usize> },
    /// First nonzero coefficient, in lexicographic order.
    FirstFailure {
        order: Vec<usize>,
        value: BigRational,
    },
}

impl Verdict {
    pub fn is_clean(&self) -> bool {
        matches!(self, Verdict::Clean { .. })
    }
}

/// Substitutes a univariate series into a `z`-free polynomial.
pub fn poly_residual_uni(series: &UniSeries, poly: &SeriesPoly) -> Verdict {
    let r = poly.residual_uni(series);
    match r.first_nonzero() {
        None => Verdict::Clean {
            through: vec![r.order()],
        },
        Some((i, v)) => Verdict::FirstFailure {
            order: vec![i],
            value: v,
        },
    }
}

/// Substitutes a bivariate series into a polynomial over `(z, u)`.
pub fn poly_residual_bi(series: &BiSeries, poly: &SeriesPoly) -> Verdict {
    let r = poly.residual_bi(series);
    match r.first_nonzero() {
        None => Verdict::Clean {
            through: vec![r.z_order(), r.u_order()],
        },
        Some((n, i, v)) => Verdict::FirstFailure {
            order: vec![n, i],
            value: v,
        },
    }
}

/// Linear ODE `sum_j coeffs[j](u) * Y^(j)(u) + inhom(u) = 0` with integer
/// polynomial coefficients.
#[derive(Debug, Clone)]
pub struct LinearOde {
    pub coeffs: Vec<Vec<(u32, i64)>>, // coeffs[j]: list of (u_degree, constant)
    pub inhom: Vec<(u32, i64)>,
}

/// Residual of a truncated series under a linear ODE; determined through
/// `order - max derivative order`.
pub fn ode_residual(series: &UniSeries, ode: &LinearOde) -> UniSeries {
    let max_order = ode.coeffs.len() - 1;
    assert!(series.order() > max_order);
    let determined = series.order() - max_order;
    let mut acc = UniSeries::zero(determined);
    let mut deriv = series.clone();
    for (j, coeff) in ode.coeffs.iter().enumerate() {
        if j > 0 {
            deriv = deriv.derivative();
        }
        let base = deriv.truncate(determined);
        for &(deg, c) in coeff {
            acc = acc.add(
                &base
                    .shift(deg as usize)
                    .scale(&BigRational::from_integer(c.into())),
            );
        }
    }
    for &(deg, c) in &ode.inhom {
        if (deg as usize) <= determined {
            let mut bump = UniSeries::zero(determined);
            bump.coeffs_mut()[deg as usize] = BigRational::from_integer(c.into());
            acc = acc.add(&bump);
        }
    }
    acc
}

/// What a catalog equation annihilates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// The `z = 0` slice of the bivariate run-count series.
    TrunkSlice,
    /// The initial-condition series `C(u)`.
    InitialConditions,
    /// The full bivariate run-count series.
    Bivariate,
    /// The diagonal form; checked on its `z = 0` slice against `D_0`.
    DiagonalForm,
}

/// One catalog entry: a named printed equation and the series it refers to.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub target: Target,
    pub check: Check,
}

#[derive(Debug, Clone)]
pub enum Check {
    Algebraic(SeriesPoly),
    Differential(LinearOde),
}

/// Multiplies two integer polynomials in `(z, u)` given as coefficient lists.
fn poly_mul(a: &[(u32, u32, i64)], b: &[(u32, u32, i64)]) -> Vec<(u32, u32, i64)> {
    use std::collections::BTreeMap;
    let mut acc: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for &(za, ua, ca) in a {
        for &(zb, ub, cb) in b {
            *acc.entry((za + zb, ua + ub)).or_insert(0) += ca * cb;
        }
    }
    acc.into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|((z, u), c)| (z, u, c))
        .collect()
}

fn u_poly(coeffs: &[(u32, i64)]) -> Vec<(u32, u32, i64)> {
    coeffs.iter().map(|&(u, c)| (0, u, c)).collect()
}

/// The five displayed equations, exactly as printed.
pub fn equation_catalog() -> Vec<CatalogEntry> {
    // recurring factor 8u^3 - 15u^2 + 12u - 4
    let f: Vec<(u32, i64)> = vec![(3, 8), (2, -15), (1, 12), (0, -4)];

    // cubic for the z = 0 slice: f(u) Y^3 + (12u^2 - 12u + 6) Y - 2u^3
    let a0_cubic = SeriesPoly::from_coefficients(&[
        vec![(0, 3, -2)],
        u_poly(&[(2, 12), (1, -12), (0, 6)]),
        vec![],
        u_poly(&f),
    ]);

    // cubic for C(u):
    //   f(u)^3 C^3 + 48 g(u) (u-1)^2 C + 32 (9u^2 - 12u + 8)(u-1)^3 = 0
    let f_zu = u_poly(&f);
    let f3 = poly_mul(&poly_mul(&f_zu, &f_zu), &f_zu);
    let g = u_poly(&[
        (6, 36),
        (5, -120),
        (4, 202),
        (3, -199),
        (2, 123),
        (1, -44),
        (0, 8),
    ]);
    let um1 = u_poly(&[(1, 1), (0, -1)]);
    let um1_sq = poly_mul(&um1, &um1);
    let um1_cu = poly_mul(&um1_sq, &um1);
    let c_lin = poly_mul(&poly_mul(&g, &um1_sq), &[(0, 0, 48)]);
    let c_const = poly_mul(
        &poly_mul(&u_poly(&[(2, 9), (1, -12), (0, 8)]), &um1_cu),
        &[(0, 0, 32)],
    );
    let c_cubic = SeriesPoly::from_coefficients(&[c_const, c_lin, vec![], f3]);

    // fourth-order ODE for C(u)
    let c_ode = LinearOde {
        coeffs: vec![
            vec![(2, 96), (1, 12), (0, 4)],              //  4 (24u^2 + 3u + 1)
            vec![(3, -336), (2, 12), (1, -4)],           // -4u (84u^2 - 3u + 1)
            vec![(4, -432), (3, 302), (2, -26)],         // -2u^2 (216u^2 - 151u + 13)
            vec![(5, -116), (4, 150), (3, -66), (2, 4)], // -2u^2 (58u^3 - 75u^2 + 33u - 2)
            vec![(6, -8), (5, 15), (4, -12), (3, 4)],    // -u^3 (8u^3 - 15u^2 + 12u - 4)
        ],
        inhom: vec![(1, -24), (0, -8)], // -8 (3u + 1)
    };

    // cubic for the bivariate series:
    //   f(u)(z^3 + 3z^2 + 6zu - 3z - 1) Y^3 + 6z^2 f(u) Y^2
    //   + 6(12zu^3 - 18zu^2 - 2u^2 + 13zu + 2u - 3z - 1) Y + 2 = 0
    let zfac: Vec<(u32, u32, i64)> = vec![(3, 0, 1), (2, 0, 3), (1, 1, 6), (1, 0, -3), (0, 0, -1)];
    let a_c3 = poly_mul(&f_zu, &zfac);
    let a_c2 = poly_mul(&f_zu, &[(2, 0, 6)]);
    let a_c1: Vec<(u32, u32, i64)> = vec![
        (1, 3, 72),
        (1, 2, -108),
        (0, 2, -12),
        (1, 1, 78),
        (0, 1, 12),
        (1, 0, -18),
        (0, 0, -6),
    ];
    let a_cubic = SeriesPoly::from_coefficients(&[vec![(0, 0, 2)], a_c1, a_c2, a_c3]);

    // cubic for the diagonal form:
    //   (9u^2 + 12u - 4)(z^3 + 3z^2 + 6u - 3z - 1) Y^3
    //   + 6z^2 (9u^2 + 12u - 4) Y^2
    //   + 6(18u^2 z - 18u^2 + 6uz + 9u - 3z - 1) Y + 2(6u - 1)^2 = 0
    let h: Vec<(u32, u32, i64)> = vec![(0, 2, 9), (0, 1, 12), (0, 0, -4)];
    let bfac: Vec<(u32, u32, i64)> = vec![(3, 0, 1), (2, 0, 3), (0, 1, 6), (1, 0, -3), (0, 0, -1)];
    let b_c3 = poly_mul(&h, &bfac);
    let b_c2 = poly_mul(&h, &[(2, 0, 6)]);
    let b_c1: Vec<(u32, u32, i64)> = vec![
        (1, 2, 108),
        (0, 2, -108),
        (1, 1, 36),
        (0, 1, 54),
        (1, 0, -18),
        (0, 0, -6),
    ];
    let b_c0: Vec<(u32, u32, i64)> = vec![(0, 2, 72), (0, 1, -24), (0, 0, 2)];
    let b_cubic = SeriesPoly::from_coefficients(&[b_c0, b_c1, b_c2, b_c3]);

    vec![
        CatalogEntry {
            name: "a0-cubic",
            target: Target::TrunkSlice,
            check: Check::Algebraic(a0_cubic),
        },
        CatalogEntry {
            name: "c-cubic",
            target: Target::InitialConditions,
            check: Check::Algebraic(c_cubic),
        },
        CatalogEntry {
            name: "c-ode",
            target: Target::InitialConditions,
            check: Check::Differential(c_ode),
        },
        CatalogEntry {
            name: "a-cubic",
            target: Target::Bivariate,
            check: Check::Algebraic(a_cubic),
        },
        CatalogEntry {
            name: "b-cubic",
            target: Target::DiagonalForm,
            check: Check::Algebraic(b_cubic),
        },
    ]
}
