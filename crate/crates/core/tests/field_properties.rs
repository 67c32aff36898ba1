mod common;

use std::cmp::Ordering;

use common::*;
use proptest::prelude::*;
use rcvf_core::field::Exponent;
use rcvf_core::{FieldElement, Value};

fn vanishes(a: &FieldElement) -> bool {
    a.terms().is_empty()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_laws(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_exact_zero());
    }

    #[test]
    fn inverses_up_to_precision(a in nonzero_element(), b in element()) {
        let inv = a.invert().unwrap();
        prop_assert!(vanishes(&(&(&a * &inv) - &FieldElement::one())));
        let q = &b * &inv;
        prop_assert!(vanishes(&(&(&q * &a) - &b)));
    }

    #[test]
    fn order_total_and_compatible(a in element(), b in element(), c in element()) {
        let ab = a.compare(&b).unwrap();
        prop_assert_eq!(b.compare(&a).unwrap(), ab.reverse());
        prop_assert_eq!((&a + &c).compare(&(&b + &c)).unwrap(), ab);
        match c.sign().unwrap() {
            Ordering::Greater => prop_assert_eq!((&a * &c).compare(&(&b * &c)).unwrap(), ab),
            Ordering::Less => prop_assert_eq!((&a * &c).compare(&(&b * &c)).unwrap(), ab.reverse()),
            Ordering::Equal => {}
        }
    }

    #[test]
    fn positives_closed(a in nonzero_element(), b in nonzero_element()) {
        let (a, b) = (abs(&a), abs(&b));
        prop_assert_eq!((&a + &b).sign().unwrap(), Ordering::Greater);
        prop_assert_eq!((&a * &b).sign().unwrap(), Ordering::Greater);
    }

    #[test]
    fn ovf_axiom(a in nonzero_element(), b in nonzero_element()) {
        let (mut a, mut b) = (abs(&a), abs(&b));
        if a.compare(&b).unwrap() == Ordering::Greater {
            std::mem::swap(&mut a, &mut b);
        }
        prop_assert!(b.valuation().unwrap() <= a.valuation().unwrap());
    }

    #[test]
    fn valuation_laws(a in element(), b in element()) {
        let (va, vb) = (a.valuation().unwrap(), b.valuation().unwrap());
        prop_assert_eq!((&a * &b).valuation().unwrap(), va + vb);
        let vs = (&a + &b).valuation().unwrap();
        prop_assert!(vs >= va.min(vb));
        if va != vb {
            prop_assert_eq!(vs, va.min(vb));
        }
    }

    #[test]
    fn residue_homomorphism(a in integral_element(), b in integral_element()) {
        let (ra, rb) = (a.residue().unwrap(), b.residue().unwrap());
        prop_assert_eq!((&a + &b).residue().unwrap(), &ra + &rb);
        prop_assert_eq!((&a * &b).residue().unwrap(), &ra * &rb);
        prop_assert_eq!((-&a).residue().unwrap(), -ra);
    }

    #[test]
    fn sqrt_squares_back(a in element()) {
        if let Ok(s) = a.sqrt() {
            prop_assert!(vanishes(&(&(&s * &s) - &a)));
            prop_assert_ne!(s.sign().unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn squares_have_roots(a in element()) {
        let sq = &a * &a;
        let s = sq.sqrt().unwrap();
        prop_assert!(vanishes(&(&s - &abs(&a))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sos_units(squares in prop::collection::vec(element_in(-4, 6), 1..=5)) {
        let r = squares.iter().fold(FieldElement::zero(), |acc, s| &acc + &(s * s));
        let u = (&FieldElement::one() + &r).invert().unwrap();
        prop_assert!(u.valuation().unwrap() >= Value::Finite(Exponent::from_integer(0)));
        prop_assert_eq!(u.sign().unwrap(), Ordering::Greater);
    }
}

fn abs(a: &FieldElement) -> FieldElement {
    if a.sign().unwrap() == Ordering::Less {
        -a
    } else {
        a.clone()
    }
}
