//! Shared inputs for the benchmarks.

use rcvf_core::syntax::{parse_field_element, parse_polynomial};
use rcvf_core::{FieldElement, Polynomial, SetDescriptor};

pub fn element(text: &str) -> FieldElement {
    parse_field_element(text).expect("valid element")
}

pub fn polynomial(text: &str) -> Polynomial {
    parse_polynomial(text).expect("valid polynomial")
}

pub fn ball(n: usize) -> SetDescriptor {
    let vars: Vec<String> = ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();
    SetDescriptor::unit_polydisc(&vars)
}
