use super::*;
use crate::field::{exp, int, rat, FieldElement, Value};
use crate::integrality::SetDescriptor;

fn x() -> Polynomial {
    Polynomial::var("x")
}

fn y() -> Polynomial {
    Polynomial::var("y")
}

fn e(n: i64, d: i64) -> Polynomial {
    eps_poly(exp(n, d))
}

fn c(n: i64) -> Polynomial {
    rational_poly(int(n))
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn fe_eps(n: i64, d: i64) -> FieldElement {
    FieldElement::eps_pow(exp(n, d))
}

#[test]
fn eval_examples() {
    let q: RationalFunction = (&x() * &x() + e(1, 1)).into();
    let v = poly_eval(&q, &names(&["x"]), &[FieldElement::eps()]).unwrap();
    assert_eq!(v, fe_eps(2, 1) + FieldElement::eps());

    let q: RationalFunction = (c(1) - &e(1, 1) * &(&x() * &x())).into();
    let v = poly_eval(&q, &names(&["x"]), &[FieldElement::one()]).unwrap();
    assert_eq!(v, FieldElement::one() - FieldElement::eps());

    let q = RationalFunction::new(x() + e(1, 1), x()).unwrap();
    let v = poly_eval(&q, &names(&["x"]), &[fe_eps(2, 1)]).unwrap();
    assert_eq!(v.valuation().unwrap(), Value::Finite(exp(-1, 1)));
    assert_eq!(v.truncate(exp(4, 1)).without_precision(), FieldElement::one() + fe_eps(-1, 1));
}

#[test]
fn eval_zero_denominator() {
    let q = RationalFunction::new(c(1), x()).unwrap();
    assert!(matches!(
        poly_eval(&q, &names(&["x"]), &[FieldElement::zero()]),
        Err(crate::Error::DivisionByZero)
    ));
}

#[test]
fn gauss_examples() {
    let q: RationalFunction = (&e(1, 1) * &(&x() * &x()) + c(3) * y()).into();
    assert_eq!(gauss_valuation(&q).unwrap(), Value::Finite(exp(0, 1)));
    let q: RationalFunction = (&e(1, 1) * &(&x() * &x()) + e(3, 1)).into();
    assert_eq!(gauss_valuation(&q).unwrap(), Value::Finite(exp(1, 1)));
    let q = RationalFunction::new(x() + e(1, 1), x()).unwrap();
    assert_eq!(gauss_valuation(&q).unwrap(), Value::Finite(exp(0, 1)));
    assert_eq!(gauss_valuation(&RationalFunction::zero()).unwrap(), Value::Top);
}

#[test]
fn sos_expression_examples() {
    let target: RationalFunction = (&x() * &x() + e(1, 1)).into();
    assert!(verify_sos_expression(&target, &SosExpr::from_polys([x(), e(1, 2)])));
    let target: RationalFunction = (c(1) + &x() * &x()).into();
    assert!(verify_sos_expression(&target, &SosExpr::from_polys([c(1), x()])));
    let target: RationalFunction = (c(1) - &e(1, 1) * &(&x() * &x())).into();
    assert!(!verify_sos_expression(&target, &SosExpr::from_polys([c(1)])));
}

#[test]
fn ring_membership_examples() {
    let set = SetDescriptor::unit_polydisc(&names(&["x1", "x2"]));
    let e = RingExpr::Sum(vec![
        RingExpr::Prod(vec![RingExpr::Gen(0), RingExpr::Gen(1)]),
        RingExpr::constant(FieldElement::from_int(3)),
    ]);
    assert!(e.verify_membership(&set));
    let v = e.eval(&set, &[FieldElement::eps(), FieldElement::one()]).unwrap();
    assert_eq!(v, FieldElement::from_int(3) + FieldElement::eps());

    let set1 = SetDescriptor::unit_polydisc(&names(&["x"]));
    let leaf = RingExpr::IOrd(SosExpr::from_polys([x()]));
    assert!(leaf.verify_membership(&set1));
    assert_eq!(leaf.eval(&set1, &[FieldElement::one()]).unwrap(), FieldElement::from_rational(rat(1, 2)));
    let off = leaf.eval(&set1, &[fe_eps(-1, 1)]).unwrap();
    assert!(off.valuation().unwrap() >= Value::Finite(exp(0, 1)));

    assert!(!RingExpr::Gen(2).verify_membership(&set));
    assert!(!RingExpr::constant(fe_eps(-1, 1)).verify_membership(&set));
    let cone = RingExpr::ICone(ConeExpr::new(vec![]));
    assert!(!cone.verify_membership(&set));
}

#[test]
fn ring_expr_symbolic_matches_pointwise() {
    let set = SetDescriptor::unit_polydisc(&names(&["x", "y"]));
    let e = RingExpr::Prod(vec![
        RingExpr::Gen(0),
        RingExpr::IOrd(SosExpr::from_polys([x(), &e(1, 1) * &y()])),
    ]);
    let rf = e.to_rational(&set).unwrap();
    let point = [FieldElement::from_rational(rat(1, 3)), fe_eps(1, 2)];
    let a = e.eval(&set, &point).unwrap();
    let b = rf.eval_named(set.vars(), &point).unwrap();
    assert_eq!((&a - &b).truncate(exp(16, 1)).without_precision(), FieldElement::zero());
}

#[test]
fn generator_polynomial_round_trip() {
    let set = SetDescriptor::unit_polydisc(&names(&["x", "y"]));
    let p = &x() * &x() - c(2) * &x() * &y() + e(1, 1);
    let r = RingExpr::from_generator_polynomial(&p, &set).unwrap();
    assert!(r.to_rational(&set).unwrap().identical(&p.into()));
    let bad = &e(-1, 1) * &x();
    assert!(matches!(
        RingExpr::from_generator_polynomial(&bad, &set),
        Err(crate::Error::CoefficientsNotIntegral)
    ));
}

#[test]
fn t_element_rules() {
    let set = SetDescriptor::unit_polydisc(&names(&["x"]));
    assert!(TElement::unit().is_well_formed(&set));
    let t = TElement::new(-FieldElement::eps(), RingExpr::Prod(vec![RingExpr::Gen(0), RingExpr::Gen(0)]));
    assert!(t.is_well_formed(&set));
    assert!(t.value(&set).unwrap().identical(&(c(1) - &e(1, 1) * &(&x() * &x())).into()));
    assert!(!TElement::new(FieldElement::one(), RingExpr::one()).is_well_formed(&set));
}

#[test]
fn rational_function_identity_is_cross_multiplication() {
    let a = RationalFunction::new(&x() * &x() - c(1), x() - c(1)).unwrap();
    let b: RationalFunction = (x() + c(1)).into();
    assert_eq!(a, b);
    assert!(RationalFunction::new(c(1), Polynomial::zero()).is_err());
}

#[test]
fn var_order_is_natural() {
    let mut v = names(&["x10", "y", "x2", "x1"]);
    v.sort_by(|a, b| var_cmp(a, b));
    assert_eq!(v, names(&["x1", "x2", "x10", "y"]));
}

#[test]
fn display_forms() {
    assert_eq!((c(1) - &e(1, 1) * &(&x() * &x())).to_string(), "1 - eps*x^2");
    let q = RationalFunction::new(x() + e(1, 1), x()).unwrap();
    assert_eq!(q.to_string(), "(eps + x)/x");
}
