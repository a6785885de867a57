//! Randomized structural properties, exact on every sampled instance.

use proptest::prelude::*;

use novikov_core::cocycles::{
    coboundary, coboundary_eval, cocycle_check, cocycle_eval, is_symmetric, trivialize_symmetric,
    Cocycle, EtaMap,
};
use novikov_core::exactmath::{FieldConfig, Scalar};
use novikov_core::groups::{GroupElement, GroupSpec};
use novikov_core::novikov::{novikov_product, AlgebraSpec, Element, JKind, Label, Xi};

fn q() -> FieldConfig {
    FieldConfig::Rational
}

fn q2() -> FieldConfig {
    FieldConfig::quadratic(2).unwrap()
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| {
        Scalar::from_int(n, q()) * Scalar::from_int(d, q()).inv().unwrap()
    })
}

fn quadratic() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(a, b, d)| {
        let inv_d = Scalar::from_int(d, q2()).inv().unwrap();
        (Scalar::from_int(a, q2()) + Scalar::from_int(b, q2()) * Scalar::sqrt_d(q2())) * inv_d
    })
}

fn nonzero(s: impl Strategy<Value = Scalar>) -> impl Strategy<Value = Scalar> {
    s.prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms_rational(a in rational(), b in rational(), c in rational()) {
        field_axioms(a, b, c);
    }

    #[test]
    fn field_axioms_quadratic(a in quadratic(), b in quadratic(), c in quadratic()) {
        field_axioms(a, b, c);
    }

    #[test]
    fn embedding_is_an_injective_homomorphism(
        a1 in -5i64..=5, a2 in -5i64..=5, b1 in -5i64..=5, b2 in -5i64..=5,
    ) {
        let delta = GroupSpec::integers_with_sqrt(q2()).unwrap();
        let g = GroupElement(vec![a1, a2]);
        let h = GroupElement(vec![b1, b2]);
        prop_assert_eq!(
            delta.embed(&g.add(&h)).unwrap(),
            delta.embed(&g).unwrap() + delta.embed(&h).unwrap()
        );
        if g != h {
            prop_assert_ne!(delta.embed(&g).unwrap(), delta.embed(&h).unwrap());
        }
    }

    #[test]
    fn coboundaries_are_symmetric_cocycles(
        values in proptest::collection::vec(nonzero(rational()), 13),
    ) {
        // η defined on [−6,6] so every sum inside the box [−3,3] is covered
        let map = (-6i64..=6)
            .zip(values)
            .map(|(a, v)| (GroupElement(vec![a]), v))
            .collect();
        let eta = EtaMap::Table { rank: 1, field: q(), map };
        let f = coboundary(&eta, 3).unwrap();
        prop_assert!(cocycle_check(&f, 3).is_none());
        prop_assert!(is_symmetric(&f, 3));
    }

    #[test]
    fn symmetric_cocycles_trivialize(c11 in nonzero(rational()), c12 in nonzero(rational()), c22 in nonzero(rational())) {
        let f = Cocycle::bimultiplicative(
            vec![vec![c11, c12.clone()], vec![c12, c22]],
            q(),
        ).unwrap();
        let eta = trivialize_symmetric(&f).unwrap();
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                let g = GroupElement(vec![a, b]);
                let h = GroupElement(vec![b, -a]);
                prop_assert_eq!(
                    cocycle_eval(&f, &g, &h).unwrap(),
                    coboundary_eval(&eta, &g, &h).unwrap()
                );
            }
        }
    }

    #[test]
    fn product_identities_on_random_elements(
        coeffs in proptest::collection::vec(rational(), 3),
        alphas in proptest::collection::vec(-2i64..=2, 3),
        js in proptest::collection::vec(0u32..=2, 3),
        b in -2i64..=2,
    ) {
        let spec = AlgebraSpec::new(
            GroupSpec::integers(q()),
            Cocycle::trivial(1, q()),
            JKind::Nat,
            Xi::Scalar(Scalar::from_int(b, q())),
        ).unwrap();
        // three random ≤2-term elements
        let el = |i: usize| {
            let mut e = Element::basis(Label::new(GroupElement(vec![alphas[i]]), js[i]), q());
            e.add_term(
                Label::new(GroupElement(vec![-alphas[i]]), js[(i + 1) % 3]),
                coeffs[i].clone(),
            );
            e
        };
        let (u, v, w) = (el(0), el(1), el(2));
        let p = |x: &Element, y: &Element| novikov_product(x, y, &spec);
        // right commutativity
        prop_assert_eq!(p(&p(&u, &v), &w), p(&p(&u, &w), &v));
        // left symmetry of the associator
        let assoc = |x: &Element, y: &Element, z: &Element| p(&p(x, y), z).sub(&p(x, &p(y, z)));
        prop_assert_eq!(assoc(&u, &v, &w), assoc(&v, &u, &w));
    }
}

fn field_axioms(a: Scalar, b: Scalar, c: Scalar) {
    assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
    assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
    assert_eq!(
        (a.clone() + b.clone()) + c.clone(),
        a.clone() + (b.clone() + c.clone())
    );
    assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
    assert_eq!(
        a.clone() * (b.clone() + c.clone()),
        a.clone() * b.clone() + a.clone() * c.clone()
    );
    if !a.is_zero() {
        let inv = a.clone().inv().unwrap();
        assert!((a * inv).is_one());
    }
}
