mod common;

use common::*;
use proptest::prelude::*;
use rcvf_core::syntax::{parse_field_element, parse_polynomial, parse_rational_function};
use rcvf_core::{FieldElement, RationalFunction};

fn truncated() -> impl Strategy<Value = FieldElement> {
    (element(), exponent(-2, 8)).prop_map(|(a, p)| a.truncate(p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scalars_round_trip(a in prop_oneof![element(), truncated()]) {
        let text = a.to_string();
        let back = parse_field_element(&text).unwrap();
        prop_assert_eq!(back.precision(), a.precision());
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn polynomials_round_trip(p in polynomial(3, 3)) {
        let text = p.to_string();
        prop_assert_eq!(parse_polynomial(&text).unwrap(), p);
    }

    #[test]
    fn quotients_round_trip(n in polynomial(2, 2), d in nonzero_polynomial(2, 2)) {
        let f = RationalFunction::new(n, d).unwrap();
        let back = parse_rational_function(&f.to_string()).unwrap();
        prop_assert_eq!(back.to_string(), f.to_string());
        prop_assert_eq!(back, f);
    }
}
