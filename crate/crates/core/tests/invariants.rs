use proptest::prelude::*;
use vamos_core::matroid::{matroid_from_matrix, uniform, vamos_matroid};
use vamos_core::poly::{basis_generating_poly, labeled_basis_poly, poly_equal, rayleigh_difference, RationalPoint};
use vamos_core::rational::q;
use vamos_core::{Matroid, RationalMatrix};

// Column matroids of small integer matrices, skipping rank-deficient draws.
fn column_matroid() -> impl Strategy<Value = Matroid> {
    (2usize..=3, 4usize..=7)
        .prop_flat_map(|(r, n)| prop::collection::vec(prop::collection::vec(-2i64..=2, n), r))
        .prop_filter_map("rank deficient", |rows| {
            let rows: Vec<Vec<_>> = rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect();
            matroid_from_matrix(&RationalMatrix::from_rows(rows).ok()?).ok()
        })
}

fn any_matroid() -> impl Strategy<Value = Matroid> {
    prop_oneof![
        column_matroid(),
        (1usize..=4, 5usize..=7).prop_map(|(r, n)| uniform(r, n).unwrap()),
        Just(vamos_matroid(4).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_an_involution(m in any_matroid()) {
        prop_assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn deletion_dualizes_to_contraction(m in any_matroid(), pick in 0usize..64) {
        let e = pick % m.n() + 1;
        if let Ok(del) = m.delete(e) {
            prop_assert_eq!(del.dual(), m.dual().contract(e).unwrap());
        }
    }

    #[test]
    fn minors_match_polynomial_operations(m in any_matroid(), pick in 0usize..64) {
        let e = pick % m.n() + 1;
        let f = basis_generating_poly(&m);
        let n = m.n();
        if let Ok(del) = m.minor(&[e], &[]) {
            prop_assert_eq!(labeled_basis_poly(&del, n).unwrap(), f.restrict(e).unwrap());
        }
        if let Ok(con) = m.minor(&[], &[e]) {
            prop_assert_eq!(labeled_basis_poly(&con, n).unwrap(), f.partial_derivative(e).unwrap());
        }
    }

    #[test]
    fn rayleigh_difference_is_symmetric(m in any_matroid(), a in 0usize..64, b in 1usize..64) {
        let n = m.n();
        let i = a % n + 1;
        let j = (i - 1 + b % (n - 1) + 1) % n + 1;
        let f = basis_generating_poly(&m);
        let dij = rayleigh_difference(&f, i, j).unwrap();
        let dji = rayleigh_difference(&f, j, i).unwrap();
        prop_assert!(poly_equal(&dij, &dji));
    }

    // Uniform matroids are Rayleigh, so the difference is nonnegative on the
    // positive orthant.
    #[test]
    fn uniform_rayleigh_nonnegative(
        r in 1usize..=4,
        coords in prop::collection::vec(1i64..=20, 7),
    ) {
        let f = basis_generating_poly(&uniform(r, 7).unwrap());
        let d = rayleigh_difference(&f, 1, 2).unwrap();
        let point = RationalPoint::new(coords.into_iter().map(q).collect());
        prop_assert!(d.evaluate(&point).unwrap() >= q(0));
    }
}
