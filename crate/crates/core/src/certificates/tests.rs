use std::cmp::Ordering;

use super::*;
use crate::field::{Exponent, Value};
use crate::integrality::{AffineModuleMap, ProbePoints};
use crate::sample::SampleConfig;
use crate::syntax::{parse_field_element, parse_polynomial, parse_rational_function};

fn poly(s: &str) -> Polynomial {
    parse_polynomial(s).unwrap()
}

fn rf(s: &str) -> RationalFunction {
    parse_rational_function(s).unwrap()
}

fn fe(s: &str) -> FieldElement {
    parse_field_element(s).unwrap()
}

fn ball(vars: &[&str]) -> SetDescriptor {
    SetDescriptor::unit_polydisc(&vars.iter().map(|v| v.to_string()).collect::<Vec<_>>())
}

fn ring(p: &str, set: &SetDescriptor) -> RingExpr {
    RingExpr::from_generator_polynomial(&poly(p), set).unwrap()
}

fn sos(xs: &[&str]) -> SosExpr {
    SosExpr::from_polys(xs.iter().map(|s| poly(s)))
}

fn nonneg_on_samples(p: &Polynomial, set: &SetDescriptor, n: usize) {
    let config = SampleConfig::with_seed(11).samples(n);
    for b in ProbePoints::new(set, &config) {
        let v = p.eval_named(set.vars(), &b).unwrap();
        assert_ne!(v.sign().unwrap(), Ordering::Less, "{p} negative at {b:?}");
    }
}

#[test]
fn verifies_the_one_minus_eps_x2_certificate() {
    let set = ball(&["x"]);
    let cert = NonnegCertificate {
        r: sos(&["1"]),
        m: fe("eps"),
        h: rf("x^2/(1 - eps*x^2)"),
        witness: IntegralityWitness::quotient(ring("x^2", &set), TElement::new(fe("-eps"), ring("x^2", &set))),
    };
    assert_eq!(check_nonneg_certificate(&poly("1 - eps*x^2"), &cert, &set), Ok(()));
}

#[test]
fn verifies_layered_certificate_without_multiplier() {
    let set = ball(&["x"]);
    let cert = NonnegCertificate {
        r: sos(&["x", "eps^(1/2)"]),
        m: FieldElement::zero(),
        h: RationalFunction::zero(),
        witness: IntegralityWitness::trivial(),
    };
    assert!(verify_nonneg_certificate(&poly("x^2 + eps"), &cert, &set));
}

#[test]
fn rejection_reasons() {
    let set = ball(&["x"]);
    let p = poly("eps - x^2");
    let cert = NonnegCertificate {
        r: sos(&["1"]),
        m: FieldElement::zero(),
        h: RationalFunction::zero(),
        witness: IntegralityWitness::trivial(),
    };
    assert_eq!(check_nonneg_certificate(&p, &cert, &set), Err(Rejection::IdentityFails));

    let good = NonnegCertificate {
        r: sos(&["1"]),
        m: fe("eps"),
        h: rf("x^2/(1 - eps*x^2)"),
        witness: IntegralityWitness::quotient(ring("x^2", &set), TElement::new(fe("-eps"), ring("x^2", &set))),
    };
    let p = poly("1 - eps*x^2");
    let mut bad = good.clone();
    bad.m = fe("1");
    bad.h = rf("eps*x^2/(1 - eps*x^2)");
    assert_eq!(check_nonneg_certificate(&p, &bad, &set).unwrap_err().code(), "multiplier");

    let mut bad = good.clone();
    bad.witness.num = RingExpr::Const(fe("eps^(-1)"));
    assert_eq!(check_nonneg_certificate(&p, &bad, &set).unwrap_err().code(), "membership");

    let mut bad = good.clone();
    bad.witness.den.m = fe("2");
    assert_eq!(check_nonneg_certificate(&p, &bad, &set).unwrap_err().code(), "t-element");

    let mut bad = good.clone();
    bad.witness.num = ring("x", &set);
    assert_eq!(check_nonneg_certificate(&p, &bad, &set).unwrap_err().code(), "witness-identity");
}

#[test]
fn monic_witness() {
    let set = ball(&["x"]);
    let p = poly("1 - eps*x^2");
    let h = rf("x^2/(1 - eps*x^2)");
    // h - x^2/(1 - eps x^2) = 0, degree one
    let c0 = MonicCoefficient {
        num: RingExpr::Prod(vec![RingExpr::Const(fe("-1")), ring("x^2", &set)]),
        den: TElement::new(fe("-eps"), ring("x^2", &set)),
    };
    let mut cert = NonnegCertificate {
        r: sos(&["1"]),
        m: fe("eps"),
        h,
        witness: IntegralityWitness { num: RingExpr::zero(), den: TElement::unit(), monic: Some(vec![c0.clone()]) },
    };
    assert!(verify_nonneg_certificate(&p, &cert, &set));
    // squared: h^2 - 2c h + c^2 with c = x^2/(1 - eps x^2)
    let two_c = RingExpr::Prod(vec![RingExpr::Const(fe("2")), c0.num.clone()]);
    let monic = vec![
        MonicCoefficient { num: ring("x^4", &set), den: TElement::new(fe("-eps"), ring("2*x^2 - eps*x^4", &set)) },
        MonicCoefficient { num: two_c, den: TElement::new(fe("-eps"), ring("x^2", &set)) },
    ];
    cert.witness.monic = Some(monic);
    assert!(verify_nonneg_certificate(&p, &cert, &set));
    cert.witness.monic = Some(Vec::new());
    assert_eq!(check_nonneg_certificate(&p, &cert, &set).unwrap_err().code(), "monic-identity");
}

fn generate(p: &str, set: &SetDescriptor) -> GenerationOutcome {
    generate_ball_certificate(&poly(p), set, &GenerationBudget::default()).unwrap()
}

fn expect_certificate(p: &str, set: &SetDescriptor) -> NonnegCertificate {
    match generate(p, set) {
        GenerationOutcome::Certificate(c) => {
            assert_eq!(check_nonneg_certificate(&poly(p), &c, set), Ok(()), "{p}");
            nonneg_on_samples(&poly(p), set, 200);
            c
        }
        other => panic!("{p}: {other:?}"),
    }
}

#[test]
fn generates_the_one_minus_eps_x2_certificate() {
    let set = ball(&["x"]);
    let c = expect_certificate("1 - eps*x^2", &set);
    assert!(c.r.value().identical(&rf("1")));
    assert_eq!(c.m, fe("eps"));
    assert_eq!(c.h, rf("x^2/(1 - eps*x^2)"));
    assert_eq!(c.witness.den.m, fe("-eps"));
    assert!(c.witness.num.to_rational(&set).unwrap().identical(&rf("x^2")));
}

#[test]
fn generates_quadratic_form_certificate() {
    let set = ball(&["x", "y"]);
    let c = expect_certificate("x^2 + 2*x*y + 2*y^2", &set);
    let texts: Vec<String> = c.r.summands().iter().map(|s| s.to_string()).collect();
    assert_eq!(texts, ["x + y", "y"]);
    assert!(c.m.is_exact_zero());
}

#[test]
fn generates_layered_certificates() {
    let set = ball(&["x", "y"]);
    let c = expect_certificate("1 + eps*x^2 + eps^3*y^4", &set);
    assert!(c.m.is_exact_zero());
    assert_eq!(c.r.summands().len(), 3);
    let c = expect_certificate("x^2 + eps", &ball(&["x"]));
    let texts: Vec<String> = c.r.summands().iter().map(|s| s.to_string()).collect();
    assert_eq!(texts, ["x", "eps^(1/2)"]);
    expect_certificate("eps + eps*x^2", &ball(&["x"]));
    expect_certificate("x^4 - 2*x^2 + 1 + eps", &ball(&["x"]));
}

#[test]
fn generates_witnessed_multipliers() {
    let c = expect_certificate("1 + eps*x^3", &ball(&["x"]));
    assert_eq!(c.m, fe("eps"));
    let c = expect_certificate("x^2 + 2*x + 3 + eps*y", &ball(&["x", "y"]));
    assert_eq!(c.m, fe("eps"));
    assert!(matches!(c.witness.num, RingExpr::Prod(_)));
    expect_certificate("1 + x^2*y^2", &ball(&["x", "y"]));
}

#[test]
fn generates_on_affine_modules() {
    let vars = vec!["x".to_string()];
    let map = AffineModuleMap::new(vec![FieldElement::zero()], vec![fe("eps")]).unwrap();
    let set = SetDescriptor::affine(&vars, map).unwrap();
    let c = expect_certificate("1 - x^2", &set);
    assert_eq!(c.m, fe("eps^2"));
    // not non-negative on the whole polydisc
    assert!(!matches!(generate("1 - x^2", &ball(&["x"])), GenerationOutcome::Certificate(_)));
}

#[test]
fn negativity_witnesses() {
    match generate("eps - x^2", &ball(&["x"])) {
        GenerationOutcome::NegativityWitness(b) => assert_eq!(b, vec![fe("1")]),
        other => panic!("{other:?}"),
    }
    match generate("x - 1", &ball(&["x"])) {
        GenerationOutcome::NegativityWitness(b) => {
            assert_eq!(poly("x - 1").eval(&b).unwrap().sign().unwrap(), Ordering::Less)
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn zero_polynomial_has_empty_certificate() {
    let set = ball(&["x"]);
    let c = expect_certificate("0", &set);
    assert!(c.r.value().is_zero());
}

#[test]
fn dickmann_examples() {
    let t = |m1: &str, q1: &str, m2: &str, q2: &str| DickmannTerm { m1: fe(m1), q1: poly(q1), m2: fe(m2), q2: poly(q2) };
    let c = DickmannCertificate { terms: vec![t("eps", "x", "0", "0")] };
    assert_eq!(verify_dickmann_certificate(&poly("1 + eps*x^2"), &c), Ok(true));
    let c = DickmannCertificate { terms: vec![t("eps", "x", "0", "0"), t("eps", "y", "0", "0")] };
    assert_eq!(verify_dickmann_certificate(&poly("2 + eps*x^2 + eps*y^2"), &c), Ok(true));
    assert_eq!(verify_dickmann_certificate(&poly("eps^(-1) + x^2"), &c), Err(crate::Error::CoefficientsNotIntegral));
    let bad = DickmannCertificate { terms: vec![t("1", "x", "0", "0"), t("-eps", "y", "0", "0")] };
    assert_eq!(verify_dickmann_certificate(&poly("2 + x^2 - eps*y^2"), &bad), Ok(false));
    let bad = DickmannCertificate { terms: vec![t("eps", "x/eps", "0", "0")] };
    assert!(verify_dickmann_certificate(&poly("1 + eps^(-1)*x^2"), &bad).is_err());
    let quotient = DickmannCertificate { terms: vec![t("eps", "x", "eps", "x")] };
    assert_eq!(verify_dickmann_certificate(&poly("1"), &quotient), Ok(true));
}

#[test]
fn characterization_examples() {
    let set = ball(&["x"]);
    let config = SampleConfig::with_seed(3).samples(500);
    let r = check_general_characterization(&poly("x^2"), &set, &config).unwrap();
    assert_eq!(r.verdict, CharacterizationVerdict::ConsistentNonneg);
    assert_eq!((r.samples, r.c_values), (500, 10));
    let r = check_general_characterization(&poly("0"), &set, &config).unwrap();
    assert_eq!(r.verdict, CharacterizationVerdict::ConsistentNonneg);
    let r = check_general_characterization(&poly("eps - x^2"), &set, &config).unwrap();
    match r.verdict {
        CharacterizationVerdict::NegativityWitness { point, c, valuation, .. } => {
            assert_eq!(point, vec![fe("1")]);
            let c2 = &c * &c;
            assert_eq!((&c2 * &fe("1 - eps")).truncate(Exponent::from_integer(20)).without_precision(), fe("1"));
            assert!(valuation.is_none_or(|v| v < Value::Finite(Exponent::from_integer(0))));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn characterization_perturbs_non_square_values() {
    // -p(0) = 2 is not a rational square; x = 1 gives -1
    let set = ball(&["x"]);
    let config = SampleConfig::with_seed(5).samples(1);
    let r = check_general_characterization(&poly("x^2 + x - 2"), &set, &config).unwrap();
    assert!(r.coherent(), "{r:?}");
}
