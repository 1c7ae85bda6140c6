use mawatam_core::arith::{
    collatz_oracle, powers2_assembly, powers2_column, read_digits, rectangle_run, run_collatz,
};
use num_bigint::BigUint;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectory_equals_oracle(x in 1u64..1 << 16, n in 0usize..=32) {
        let x = BigUint::from(x);
        let r = run_collatz(&x, n).unwrap();
        prop_assert_eq!(r.value, collatz_oracle(&x, n));
    }

    #[test]
    fn rectangle_identity_holds(
        north in proptest::collection::vec(any::<bool>(), 1..=12),
        east in proptest::collection::vec(0u8..3, 1..=12),
    ) {
        let r = rectangle_run(&north, &east).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
    }

    #[test]
    fn row_law(north in proptest::collection::vec(any::<bool>(), 1..=16), e in 0u8..3) {
        let r = rectangle_run(&north, &[e]).unwrap();
        prop_assert_eq!(r.lhs.clone(), r.rhs.clone());
        prop_assert_eq!(r.east, BigUint::from(e));
    }
}

#[test]
fn column_law_to_forty() {
    let m = 41;
    let asm = powers2_assembly(m).unwrap();
    for n in 0..m {
        let (v, digits) = read_digits(&asm, &powers2_column(m, n)).unwrap();
        assert_eq!(v, BigUint::from(1u8) << n);
        assert_eq!(digits.trim_start_matches('0'), v.to_str_radix(3));
    }
}
