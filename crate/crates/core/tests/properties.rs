//! Property tests for algebraic invariants.

use proptest::prelude::*;

use modext::cohomology::coboundary_matrix;
use modext::constructors::{ising_mtc, pointed_mtc, semion, svect_data, toric_code, MetricGroup};
use modext::data::{conjugate, deligne_product, is_modular, PreModularData};
use modext::equivalence::find_equivalence;
use modext::Phase;

fn metric_group() -> impl Strategy<Value = MetricGroup> {
    prop::collection::vec(2u64..=5, 1..=2)
        .prop_filter("order <= 16", |o| o.iter().product::<u64>() <= 16)
        .prop_flat_map(|orders| {
            let diag: Vec<_> = orders.iter().map(|&n| (0..2 * n as i64).prop_map(move |t| (n as i64, t))).collect();
            let g = if orders.len() == 2 { num_integer::gcd(orders[0], orders[1]) as i64 } else { 1 };
            (Just(orders), diag, 0..g)
        })
        .prop_filter_map("q(e_i) must satisfy n²q ∈ Z", |(orders, diag, b)| {
            if diag.iter().any(|&(n, t)| (n * t) % 2 != 0) {
                return None;
            }
            let diag: Vec<Phase> = diag.iter().map(|&(n, t)| Phase::new(t, 2 * n)).collect();
            let g = if orders.len() == 2 { num_integer::gcd(orders[0], orders[1]) as i64 } else { 1 };
            let pairing = [vec![Phase::ZERO, Phase::new(b, g)], vec![Phase::ZERO; 2]];
            MetricGroup::from_generators(&orders, &diag, &pairing[..orders.len()]).ok()
        })
}

fn small_data() -> impl Strategy<Value = PreModularData> {
    prop_oneof![
        Just(toric_code()),
        Just(semion()),
        Just(svect_data()),
        (0i64..8).prop_map(|m| ising_mtc(Phase::new(2 * m + 1, 16)).unwrap()),
    ]
}

fn same(a: &PreModularData, b: &PreModularData) -> bool {
    find_equivalence(a, b, &[]).unwrap().is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn balancing_holds_on_metric_groups(m in metric_group()) {
        let data = pointed_mtc(&m);
        prop_assert!(data.balancing_residual() < 1e-12);
        prop_assert_eq!(is_modular(&data).is_modular, m.is_nondegenerate());
    }

    #[test]
    fn conjugation_is_an_involution(d in small_data()) {
        let back = conjugate(&conjugate(&d));
        prop_assert_eq!(back.twists(), d.twists());
        prop_assert!((back.smatrix() - d.smatrix()).norm() < 1e-15);
    }

    #[test]
    fn deligne_product_is_commutative_and_associative(a in small_data(), b in small_data(), c in small_data()) {
        prop_assert!(same(&deligne_product(&a, &b), &deligne_product(&b, &a)));
        let left = deligne_product(&deligne_product(&a, &b), &c);
        let right = deligne_product(&a, &deligne_product(&b, &c));
        prop_assert!(same(&left, &right));
    }

    #[test]
    fn coboundary_squares_to_zero(orders in prop::sample::select(vec![vec![2u64], vec![3], vec![4], vec![2, 2]]),
                                  degree in 1usize..=3,
                                  seed in prop::collection::vec(-5i64..=5, 256)) {
        let d1 = coboundary_matrix(&orders, degree).unwrap();
        let d2 = coboundary_matrix(&orders, degree + 1).unwrap();
        let x: Vec<i64> = (0..d1[0].len()).map(|i| seed[i % seed.len()]).collect();
        let y: Vec<i64> = d1.iter().map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
        prop_assert!(d2.iter().all(|r| r.iter().zip(&y).map(|(a, b)| a * b).sum::<i64>() == 0));
    }

    #[test]
    fn phase_arithmetic(a in -100i64..100, b in 1i64..40, c in -100i64..100, d in 1i64..40) {
        let (x, y) = (Phase::new(a, b), Phase::new(c, d));
        prop_assert_eq!(x + y - y, x);
        prop_assert_eq!(x + (-x), Phase::ZERO);
        prop_assert_eq!(x.to_string().parse::<Phase>().unwrap(), x);
        prop_assert!(x.to_f64() >= 0.0 && x.to_f64() < 1.0);
    }
}
