//! Acceptance suite: every hard criterion of the artifact, at full scale.
//!
//! Each test prints one `PASS`/`FAIL` line (run with `--nocapture` to see
//! them individually; any failure also fails the test). The same checks
//! back the CLI `selftest` subcommand at desk scale.

use archruns::selftest::{self, CheckResult};

fn assert_check(r: CheckResult) {
    println!(
        "{} {:<28} {}",
        if r.passed { "PASS" } else { "FAIL" },
        r.name,
        r.detail
    );
    assert!(r.passed, "{}: {}", r.name, r.detail);
}

#[test]
fn criterion_01_oracle_equality() {
    assert_check(selftest::check_oracle_equality(false));
}

#[test]
fn criterion_02_diagonal_reference_values() {
    assert_check(selftest::check_diagonal_reference_values(false));
}

#[test]
fn criterion_03_unrank_bijection() {
    assert_check(selftest::check_unrank_bijection(false));
}

#[test]
fn criterion_04_unrank_anchor() {
    assert_check(selftest::check_unrank_anchor(false));
}

#[test]
fn criterion_05_exact_uniformity() {
    assert_check(selftest::check_exact_uniformity(false));
}

#[test]
fn criterion_06_statistical_uniformity() {
    assert_check(selftest::check_statistical_uniformity(false));
}

#[test]
fn criterion_07_bounds_sandwich() {
    assert_check(selftest::check_bounds_sandwich(false));
}

#[test]
fn criterion_08_pde_residual() {
    assert_check(selftest::check_pde_residual(false));
}

#[test]
fn criterion_09_bivariate_cubic() {
    assert_check(selftest::check_bivariate_cubic(false));
}

#[test]
fn criterion_10_closed_form_crosscheck() {
    assert_check(selftest::check_closed_form_crosscheck(false));
}

#[test]
fn criterion_11_asymptotics() {
    assert_check(selftest::check_asymptotics(false));
}

#[test]
fn criterion_12_large_scale_sampling() {
    assert_check(selftest::check_large_scale_sampling(false));
}
