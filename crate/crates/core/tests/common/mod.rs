#![allow(dead_code)]

use proptest::prelude::*;
use rcvf_core::field::{rat, Exponent};
use rcvf_core::{FieldElement, Polynomial};

pub fn exponent(lo: i64, hi: i64) -> impl Strategy<Value = Exponent> {
    (lo..=hi, prop::sample::select(vec![1i64, 2, 3])).prop_map(|(n, d)| Exponent::new(n, d))
}

pub fn coefficient() -> impl Strategy<Value = rcvf_core::Rational> {
    (-12i64..=12, 1i64..=6).prop_filter("nonzero", |(n, _)| *n != 0).prop_map(|(n, d)| rat(n, d))
}

/// Exact series with 1..=4 terms and exponents in `[lo, hi]`.
pub fn element_in(lo: i64, hi: i64) -> impl Strategy<Value = FieldElement> {
    prop::collection::vec((exponent(lo, hi), coefficient()), 1..=4).prop_map(|t| FieldElement::new(t, None))
}

/// Exact series with integer exponents in `[lo, hi]`.
pub fn laurent_in(lo: i64, hi: i64) -> impl Strategy<Value = FieldElement> {
    prop::collection::vec((lo..=hi, coefficient()), 1..=3)
        .prop_map(|t| FieldElement::new(t.into_iter().map(|(e, c)| (Exponent::from_integer(e), c)), None))
}

pub fn element() -> impl Strategy<Value = FieldElement> {
    element_in(-3, 6)
}

pub fn nonzero_element() -> impl Strategy<Value = FieldElement> {
    element().prop_filter("nonzero", |a| !a.is_exact_zero())
}

pub fn integral_element() -> impl Strategy<Value = FieldElement> {
    element_in(0, 6)
}

pub fn vars(n: usize) -> Vec<String> {
    ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
}

/// Random polynomial in `n` variables of total degree at most `deg`.
pub fn polynomial(n: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    let mono = prop::collection::vec(0..=deg, n).prop_filter("degree", move |m| m.iter().sum::<u32>() <= deg);
    prop::collection::vec((mono, element_in(-2, 4)), 1..=5)
        .prop_map(move |terms| Polynomial::from_terms(&vars(n), terms).expect("valid terms"))
}

/// Like [`polynomial`] with integer-exponent coefficients.
pub fn laurent_polynomial(n: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    let mono = prop::collection::vec(0..=deg, n).prop_filter("degree", move |m| m.iter().sum::<u32>() <= deg);
    prop::collection::vec((mono, laurent_in(-2, 3)), 1..=3).prop_map(move |terms| {
        Polynomial::from_terms(&vars(n), terms).expect("valid terms")
    })
}

pub fn nonzero_polynomial(n: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    polynomial(n, deg).prop_filter("nonzero", |p| !p.is_zero())
}
