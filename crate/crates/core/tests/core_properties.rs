mod common;

use common::*;
use leastinterp::jet::truncated_compose;
use leastinterp::{Field, One, OrderValue, Poly, Scalar, Zero};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (gaussian(&mut r), gaussian(&mut r), gaussian(&mut r));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((a.clone() * b.clone()).conj(), a.conj() * b.conj());
        if !a.is_zero() {
            prop_assert_eq!(a.clone() * a.inv(), Scalar::one());
        }
        let back: Scalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn orders_add_under_products(seed in any::<u64>()) {
        let mut r = rng(seed);
        let lo1 = r.gen_range(0..3);
        let lo2 = r.gen_range(0..3);
        let f = jet(&mut r, 2, lo1, 4);
        let g = leastinterp::jet::Jet::from_poly(&poly_with(&mut r, 2, lo2, 4, 0.4, gaussian), f.base().to_vec());
        let (of, og) = (f.order_of().unwrap(), g.order_of().unwrap());
        let ofg = f.mul(&g, None).order_of().unwrap();
        match (of, og) {
            (OrderValue::Finite(a), OrderValue::Finite(b)) => prop_assert_eq!(ofg, OrderValue::Finite(a + b)),
            _ => prop_assert_eq!(ofg, OrderValue::Infinity),
        }
        let sum = f.add(&g).order_of().unwrap();
        prop_assert!(sum >= of.min(og));
        if of != og {
            prop_assert_eq!(sum, of.min(og));
        }
    }

    #[test]
    fn truncation_commutes_with_composition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = leastinterp::pushforward::Parametrization::parse(
            "(t1 + exp1m(t2), sinS(t1) - t2, log1p(t1*t2))",
            &names(2),
            vec![Scalar::zero(), Scalar::zero()],
        ).unwrap();
        let f: Poly = poly_with(&mut r, 3, 0, 3, 0.3, gaussian);
        let k = r.gen_range(2..8);
        let k2 = r.gen_range(0..k);
        let big = truncated_compose(&f, &phi.component_jets(k).unwrap(), k).unwrap();
        let small = truncated_compose(&f, &phi.component_jets(k2).unwrap(), k2).unwrap();
        prop_assert_eq!(big.truncate(k2).flatten(k2), small.flatten(k2));
    }
}
