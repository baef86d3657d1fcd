use iwasawa::field::{QuadElem, QuadField, Rational};
use iwasawa::heisenberg::{bch, cocycle, k2_to_q4, HeisPoint};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn field() -> impl Strategy<Value = QuadField> {
    prop::sample::select(vec![1i64, 2, 3, 5, 7]).prop_map(|d| QuadField::new(d).unwrap())
}

fn elem(f: QuadField) -> impl Strategy<Value = QuadElem> {
    (small_rational(), small_rational()).prop_map(move |(a, b)| f.elem(a, b))
}

fn point(f: QuadField) -> impl Strategy<Value = HeisPoint> {
    (elem(f), elem(f), elem(f)).prop_map(|(a, b, c)| HeisPoint::new(a, b, c).unwrap())
}

fn triple() -> impl Strategy<Value = (HeisPoint, HeisPoint, HeisPoint)> {
    field().prop_flat_map(|f| (point(f), point(f), point(f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_axioms((g, h, k) in triple()) {
        prop_assert_eq!(g.mul(&h).unwrap().mul(&k).unwrap(), g.mul(&h.mul(&k).unwrap()).unwrap());
        let id = HeisPoint::identity(g.field());
        prop_assert_eq!(g.mul(&g.inv()).unwrap(), id.clone());
        prop_assert_eq!(g.inv().mul(&g).unwrap(), id.clone());
        prop_assert_eq!(g.mul(&id).unwrap(), g.clone());
    }

    #[test]
    fn commutator_is_the_central_cocycle((g, h, _) in triple()) {
        let c = g.commutator(&h).unwrap();
        prop_assert!(c.is_central());
        let v = k2_to_q4(&g.a, &g.b);
        let w = k2_to_q4(&h.a, &h.b);
        prop_assert_eq!(&c.c, &cocycle(g.field(), &v, &w));
        prop_assert_eq!(&c.c, &(&(&g.a * &h.b) - &(&g.b * &h.a)));
        // The cocycle is alternating.
        prop_assert_eq!(cocycle(g.field(), &v, &w), &g.field().zero() - &cocycle(g.field(), &w, &v));
    }

    #[test]
    fn exp_log_and_bch((g, h, _) in triple()) {
        prop_assert_eq!(g.log().exp(), g.clone());
        let z = bch(&g.log(), &h.log()).unwrap();
        prop_assert_eq!(z.exp(), g.mul(&h).unwrap());
        prop_assert_eq!(g.mul(&h).unwrap().log(), z);
    }

    #[test]
    fn powers_agree_with_products((g, _, _) in triple(), n in -4i64..=4) {
        let mut expected = HeisPoint::identity(g.field());
        let step = if n >= 0 { g.clone() } else { g.inv() };
        for _ in 0..n.unsigned_abs() {
            expected = expected.mul(&step).unwrap();
        }
        prop_assert_eq!(g.pow(&n.into()), expected);
    }
}
