use num_bigint::BigUint;
use num_traits::Zero;
use partikit::fdsum::decomposition_check_all;
use partikit::{dp_count, dp_table, IntPoly, WeightSystem};
use proptest::prelude::*;

fn weights(max_r: usize, max_a: i64) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(1..=max_a, 1..=max_r)
}

fn one_minus_power(e: u64) -> IntPoly {
    let mut c = vec![0i64; e as usize + 1];
    c[0] = 1;
    c[e as usize] -= 1;
    IntPoly::from_i64(&c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluators_agree(a in weights(4, 12)) {
        let ws = WeightSystem::new(&a).unwrap();
        let table = dp_table(ws.weights(), 400);
        let qp = ws.quasi_build();
        for (n, dp) in table.iter().enumerate() {
            prop_assert_eq!(&ws.box_count(n as i64), dp);
            prop_assert_eq!(&qp.eval(n as i64).unwrap(), dp);
        }
    }

    #[test]
    fn counts_vanish_for_negative_n(a in weights(4, 12)) {
        let ws = WeightSystem::new(&a).unwrap();
        let d = ws.period() as i64;
        for n in -5 * d..0 {
            prop_assert!(ws.box_count(n).is_zero());
            prop_assert!(dp_count(ws.weights(), n).is_zero());
        }
        prop_assert!(ws.quasi_build().eval(-1).is_err());
    }

    #[test]
    fn numerator_identity(a in weights(4, 12)) {
        let ws = WeightSystem::new(&a).unwrap();
        let lhs = ws.weights().iter().fold(ws.numerator_poly(), |acc, &x| &acc * &one_minus_power(x));
        prop_assert_eq!(lhs, one_minus_power(ws.period()).pow(ws.r() as u32));
    }

    #[test]
    fn bucket_totals_and_ranges(a in weights(4, 12)) {
        let ws = WeightSystem::new(&a).unwrap();
        let total: BigUint = ws.buckets().iter().flatten().map(|bv| bv.multiplicity.clone()).sum();
        prop_assert_eq!(&total, ws.box_size());
        for (c, bucket) in ws.buckets().iter().enumerate() {
            for bv in bucket {
                prop_assert_eq!(bv.value % ws.period(), c as u64);
                prop_assert!(bv.value <= ws.max_box_value());
            }
        }
    }

    #[test]
    fn constituents_have_bounded_degree(a in weights(4, 10)) {
        let ws = WeightSystem::new(&a).unwrap();
        let qp = ws.quasi_build();
        prop_assert_eq!(qp.constituents().len() as u64, ws.period());
        for q in qp.constituents() {
            prop_assert!(q.degree().is_none_or(|d| d < ws.r()));
        }
    }

    #[test]
    fn decomposition_difference_is_constant(a in weights(3, 9)) {
        let ws = WeightSystem::new(&a).unwrap();
        prop_assume!(ws.pairwise_coprime());
        for d in decomposition_check_all(&ws).unwrap() {
            prop_assert!(d.equal, "k = {}: {} vs {}", d.k, d.lhs, d.rhs);
        }
    }
}
