//! Polynomials and rational functions over the series field, plus the
//! structured expressions used as certificate leaves: sums of squares, cone
//! elements, generated-ring elements and `1 + m*a` denominators.

mod expr;
mod polynomial;
mod rational_fn;

use std::cmp::Ordering;

pub use expr::{ConeExpr, ConeTerm, RingExpr, SosExpr, TElement, DEFAULT_CONE_DEGREE_CAP};
pub use polynomial::{eps_poly, rational_poly, Monomial, Polynomial};
pub use rational_fn::RationalFunction;

use crate::error::Result;
use crate::field::{FieldElement, Value};

/// Natural variable order: alphabetic prefix, then numeric suffix (`x2 < x10`).
pub fn var_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let idx = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (head, tail) = s.split_at(idx);
        (head, tail.parse().ok())
    }
    let (ha, na) = split(a);
    let (hb, nb) = split(b);
    ha.cmp(hb).then(na.cmp(&nb)).then(a.cmp(b))
}

/// Value of `q` at `point`, coordinates listed against `names`.
pub fn poly_eval(q: &RationalFunction, names: &[String], point: &[FieldElement]) -> Result<FieldElement> {
    q.eval_named(names, point)
}

pub fn gauss_valuation(q: &RationalFunction) -> Result<Value> {
    q.gauss_valuation()
}

/// Whether `r` squares-and-sums to `target` as a rational-function identity.
pub fn verify_sos_expression(target: &RationalFunction, r: &SosExpr) -> bool {
    r.value().identical(target)
}

#[cfg(test)]
mod tests;
