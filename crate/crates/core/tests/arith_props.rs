mod common;

use common::*;
use proptest::prelude::*;
use quatcert::field::FieldElem;
use quatcert::gauss::GaussInt;
use quatcert::ring::RingElem;

fn ring_elem() -> impl Strategy<Value = RingElem> {
    prop_oneof![gauss_int(10_000).prop_map(RingElem::Gauss), poly(8).prop_map(RingElem::Poly)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn factorization_multiplies_back(x in ring_elem()) {
        let f = x.factor().unwrap();
        prop_assert_eq!(f.multiply_back(), x);
        prop_assert!(f.unit.is_unit());
        prop_assert!(f.primes.windows(2).all(|w| w[0].0.canonical_cmp(&w[1].0).is_lt()));
        for (p, _) in &f.primes {
            prop_assert!(p.is_canonical() && p.is_prime());
        }
    }
}

proptest! {
    #[test]
    fn canonical_associate_is_idempotent(x in ring_elem()) {
        let (u, c) = x.canonical_associate().unwrap();
        prop_assert_eq!(&(&u * &c), &x);
        let (u2, c2) = c.canonical_associate().unwrap();
        prop_assert!(u2.is_one());
        prop_assert_eq!(c2, c);
    }

    #[test]
    fn canonical_associate_is_constant_on_classes(x in gauss_int(1000), p in poly(5)) {
        let c = x.canonical_associate().unwrap().1;
        for u in GaussInt::units() {
            prop_assert_eq!(&(&u * &x).canonical_associate().unwrap().1, &c);
        }
        let c = p.canonical_associate().unwrap().1;
        for k in 1..5 {
            prop_assert_eq!(&p.scale(k).canonical_associate().unwrap().1, &c);
        }
    }

    #[test]
    fn squares_and_prime_multiples(x in any_elem(100, 4), i in 0usize..8) {
        let sq = x.square();
        prop_assert!(sq.is_global_square().unwrap());
        let v = place_for(&x, i, true);
        if let Some(pi) = v.prime() {
            let pi = FieldElem::from_ring(pi.clone());
            prop_assert!(!(&pi * &sq).is_global_square().unwrap());
        }
    }

    #[test]
    fn text_round_trip(x in any_elem(1000, 6)) {
        prop_assert_eq!(x.to_string().parse::<FieldElem>().unwrap(), x);
    }
}
