mod support;

use support::oracles::{cauchy_binet_vs_determinant, leibniz_det, numeric_distinct_real_roots, psd_vs_float, sturm_vs_numeric};
use vamos_core::rational::q;

#[test]
fn numeric_root_counter_sanity() {
    assert_eq!(numeric_distinct_real_roots(&[2.0, -3.0, 1.0]), 2);
    assert_eq!(numeric_distinct_real_roots(&[1.0, 0.0, 1.0]), 0);
    // (x-1)^2 (x+2): the double root must not split into two
    assert_eq!(numeric_distinct_real_roots(&[2.0, -3.0, 0.0, 1.0]), 2);
}

#[test]
fn leibniz_sanity() {
    let m = vec![vec![q(1), q(2)], vec![q(3), q(4)]];
    assert_eq!(leibniz_det(&m), q(-2));
}

#[test]
fn sturm_matches_numeric_roots() {
    assert_eq!(sturm_vs_numeric(600, 1), (600, 0));
}

#[test]
fn exact_psd_matches_eigenvalues() {
    assert_eq!(psd_vs_float(600, 2), (600, 0));
}

#[test]
fn cauchy_binet_matches_determinant() {
    assert_eq!(cauchy_binet_vs_determinant(150, 3), (150, 0));
}
