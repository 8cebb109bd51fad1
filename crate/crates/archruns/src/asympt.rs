//! Leading-order asymptotics of the diagonal counts.
//!
//! For fixed offset `i`, the diagonal `t(k+i, k)` grows like
//! `gamma_i * rho^{-k} * k! / sqrt(k)` where `rho = (2/3)(sqrt(2)-1)` is the
//! dominant singularity of the diagonal generating functions and the
//! constants satisfy `gamma_i = (sqrt(2)-1)^{-i} * gamma_0`. Everything here
//! is evaluated in log space so large `k` cannot overflow.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Dominant singularity `rho = (2/3)(sqrt(2)-1)`, the positive root of
/// `1 - 3u - (9/4)u^2`.
pub fn dominant_singularity() -> f64 {
    2.0 / 3.0 * (std::f64::consts::SQRT_2 - 1.0)
}

/// Leading constant `gamma_i` for the diagonal at offset `i >= -1`.
pub fn diagonal_constant(i: i32) -> f64 {
    let s = std::f64::consts::SQRT_2 - 1.0;
    let gamma0 = 0.5 * (3.0 * s / (std::f64::consts::SQRT_2 * std::f64::consts::PI)).sqrt();
    s.powi(-i) * gamma0
}

/// `ln k!` by direct summation (exact to f64 rounding for `k <= 10^4`,
/// which covers every use in this crate).
pub fn ln_factorial(k: u64) -> f64 {
    (1..=k).map(|j| (j as f64).ln()).sum()
}

/// `ln` of the leading-order estimate of `t(k+i, k)`:
/// `ln(gamma_i) - k ln(rho) + ln(k!) - (1/2) ln(k)`.
pub fn asymptotic_log_estimate(i: i32, k: u64) -> f64 {
    assert!(i >= -1, "diagonal constants are defined for i >= -1");
    assert!(k >= 1);
    diagonal_constant(i).ln() - (k as f64) * dominant_singularity().ln() + ln_factorial(k)
        - 0.5 * (k as f64).ln()
}

/// Natural log of a positive big integer, via its top 53 bits.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let top = x >> (bits - 53);
    top.to_f64().expect("53 bits fit in f64").ln() + (bits - 53) as f64 * std::f64::consts::LN_2
}
