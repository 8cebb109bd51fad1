//! Chi-square goodness-of-fit against the uniform distribution.
//!
//! The p-value comes from the regularized incomplete gamma function,
//! computed with the usual series / continued-fraction split.

/// Lanczos approximation of `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    const G: [f64; 6] = [
        76.180_091_729_471_46,
        -86.505_320_329_416_77,
        24.014_098_240_830_91,
        -1.231_739_572_450_155,
        0.120_865_097_386_617_9e-2,
        -0.539_523_938_495_3e-5,
    ];
    let mut ser = 1.000_000_000_190_015;
    let mut den = x;
    for g in G {
        den += 1.0;
        ser += g / den;
    }
    let tmp = x + 5.5;
    (2.506_628_274_631_000_5 * ser / x).ln() - tmp + (x + 0.5) * tmp.ln()
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // series representation
        let mut ap = a;
        let mut sum = 1.0 / a;
        let mut del = sum;
        for _ in 0..500 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-15 {
                break;
            }
        }
        sum * (-x + a * x.ln() - ln_gamma(a)).exp()
    } else {
        // continued fraction for Q, then P = 1 - Q
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-15 {
                break;
            }
        }
        1.0 - (-x + a * x.ln() - ln_gamma(a)).exp() * h
    }
}

/// Chi-square statistic of observed counts against the uniform law.
pub fn chi_square_stat(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// Upper tail probability of a chi-square variable with `df` degrees of
/// freedom exceeding `stat`.
pub fn chi_square_p_value(stat: f64, df: f64) -> f64 {
    (1.0 - gamma_p(df / 2.0, stat / 2.0)).clamp(0.0, 1.0)
}

/// Statistic and p-value of a uniformity test over `counts.len()` cells.
pub fn chi_square_uniform_test(counts: &[u64]) -> (f64, f64) {
    let stat = chi_square_stat(counts);
    let df = counts.len() as f64 - 1.0;
    (stat, chi_square_p_value(stat, df))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_reference_points() {
        assert!((ln_gamma(1.0)).abs() < 1e-12);
        assert!((ln_gamma(5.0) - (24f64).ln()).abs() < 1e-10);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-10);
    }

    #[test]
    fn chi_square_reference_quantiles() {
        // classical critical values
        assert!((chi_square_p_value(3.841, 1.0) - 0.05).abs() < 1e-3);
        assert!((chi_square_p_value(18.307, 10.0) - 0.05).abs() < 1e-3);
        // df = 99 at significance 0.001
        let p = chi_square_p_value(148.230, 99.0);
        assert!((p - 0.001).abs() < 5e-5, "p = {p}");
    }

    #[test]
    fn uniform_counts_pass_loudly_skewed_fail() {
        let flat = vec![100u64; 50];
        let (_, p) = chi_square_uniform_test(&flat);
        assert!(p > 0.99);
        let mut skew = vec![100u64; 50];
        skew[0] = 400;
        let (_, p) = chi_square_uniform_test(&skew);
        assert!(p < 1e-6);
    }
}
