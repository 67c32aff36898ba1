mod common;

use std::cmp::Ordering;

use common::*;
use proptest::prelude::*;
use rcvf_core::certificates::{
    check_nonneg_certificate, generate_ball_certificate, verify_dickmann_certificate, verify_nonneg_certificate,
    DickmannCertificate, DickmannTerm, GenerationBudget, GenerationOutcome,
};
use rcvf_core::field::{rat, Exponent};
use rcvf_core::integrality::ProbePoints;
use rcvf_core::{FieldElement, Polynomial, SampleConfig, SetDescriptor, Value};

fn residue_square_sum(n: usize) -> impl Strategy<Value = Polynomial> {
    let poly = prop::collection::vec((prop::collection::vec(0u32..=1, n), coefficient()), 1..=3)
        .prop_map(move |t| {
            let t = t.into_iter().map(|(m, c)| (m, FieldElement::from_rational(c)));
            Polynomial::from_terms(&vars(n), t).unwrap()
        });
    prop::collection::vec(poly, 0..=2).prop_map(move |ts| {
        ts.iter().fold(Polynomial::zero().embed(&vars(n)).unwrap(), |acc, t| &acc + &(t * t))
    })
}

/// `sos + c + eps^k * q`: positive residue, integral perturbation.
fn positive_target(n: usize) -> impl Strategy<Value = Polynomial> {
    (residue_square_sum(n), 1i64..=6, 1i64..=3, polynomial(n, 2)).prop_map(move |(s, c, k, q)| {
        let q = match q.gauss_valuation().unwrap() {
            Value::Finite(g) => q.scale(&FieldElement::eps_pow(Exponent::from_integer(k) - g)),
            Value::Top => q,
        };
        &(&s + &Polynomial::constant(FieldElement::from_int(c))) + &q
    })
}

fn nonneg_on_samples(p: &Polynomial, set: &SetDescriptor, seed: u64) -> Option<Vec<FieldElement>> {
    ProbePoints::new(set, &SampleConfig::with_seed(seed).samples(1000))
        .find(|b| p.eval_named(set.vars(), b).unwrap().sign().unwrap() == Ordering::Less)
}

fn budget() -> GenerationBudget {
    GenerationBudget { falsifier: SampleConfig::with_seed(1).samples(200), ..GenerationBudget::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn generated_certificates_verify_and_hold(p in positive_target(2), seed in 0u64..1000) {
        let set = SetDescriptor::unit_polydisc(&vars(2));
        let outcome = generate_ball_certificate(&p, &set, &budget()).unwrap();
        if let GenerationOutcome::Certificate(cert) = outcome {
            prop_assert_eq!(check_nonneg_certificate(&p, &cert, &set), Ok(()));
            prop_assert!(cert.witness.check(&cert.h, &set).is_ok());
            let bad = nonneg_on_samples(&p, &set, seed);
            prop_assert!(bad.is_none(), "negative at {:?}", bad);
            let probes = ProbePoints::new(&set, &SampleConfig::with_seed(seed).samples(1000));
            for b in probes {
                if let Ok(v) = cert.h.valuation_at(set.vars(), &b) {
                    prop_assert!(v >= Value::Finite(Exponent::from_integer(0)), "h not integral at {:?}", b);
                }
            }
        }
    }

    #[test]
    fn tampered_certificates_are_rejected(p in positive_target(1), k in 0i64..=4, which in 0usize..3) {
        let set = SetDescriptor::unit_polydisc(&vars(1));
        let Ok(GenerationOutcome::Certificate(mut cert)) = generate_ball_certificate(&p, &set, &budget()) else {
            return Ok(());
        };
        let nudge = FieldElement::eps_pow(Exponent::from_integer(k));
        let target = match which {
            0 => &p - &Polynomial::constant(nudge),
            1 => {
                cert.m = &cert.m + &nudge;
                p.clone()
            }
            _ => {
                cert.m = FieldElement::eps_pow(Exponent::from_integer(-k));
                p.clone()
            }
        };
        if verify_nonneg_certificate(&target, &cert, &set) {
            let bad = nonneg_on_samples(&target, &set, 5);
            prop_assert!(bad.is_none(), "accepted certificate but negative at {:?}", bad);
        }
        if which == 0 {
            prop_assert!(!verify_nonneg_certificate(&target, &cert, &set));
        }
    }
}

fn integral_poly(n: usize) -> impl Strategy<Value = Polynomial> {
    let mono = prop::collection::vec(0u32..=2, n);
    prop::collection::vec((mono, integral_element()), 1..=3).prop_map(move |t| Polynomial::from_terms(&vars(n), t).unwrap())
}

fn dickmann_term(n: usize) -> impl Strategy<Value = DickmannTerm> {
    let m = (1i64..=6, 1i64..=3).prop_map(|(a, b)| FieldElement::eps_pow(Exponent::new(a, b)));
    prop_oneof![
        (m.clone(), integral_poly(n)).prop_map(|(m1, q1)| DickmannTerm {
            m1,
            q1,
            m2: FieldElement::zero(),
            q2: Polynomial::zero(),
        }),
        (m, integral_poly(n)).prop_map(|(m1, q1)| DickmannTerm { m1: m1.clone(), q1: q1.clone(), m2: m1, q2: q1 }),
    ]
}

/// Polynomial denoted by terms built by [`dickmann_term`].
fn dickmann_target(terms: &[DickmannTerm]) -> Polynomial {
    terms.iter().fold(Polynomial::zero(), |acc, t| {
        let side = if t.m2.is_exact_zero() { &Polynomial::one() + &(&t.q1 * &t.q1).scale(&t.m1) } else { Polynomial::one() };
        &acc + &side
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn dickmann_certificates_are_sound(terms in prop::collection::vec(dickmann_term(2), 1..=3), seed in 0u64..1000) {
        let set = SetDescriptor::unit_polydisc(&vars(2));
        let cert = DickmannCertificate { terms };
        let p = dickmann_target(&cert.terms);
        prop_assert_eq!(verify_dickmann_certificate(&p, &cert), Ok(true));
        prop_assert!(nonneg_on_samples(&p, &set, seed).is_none());
    }

    #[test]
    fn corrupted_dickmann_certificates_are_rejected(
        terms in prop::collection::vec(dickmann_term(2), 1..=3),
        which in 0usize..3,
        k in 0i64..=3,
    ) {
        let mut cert = DickmannCertificate { terms };
        let p = dickmann_target(&cert.terms);
        let t = &mut cert.terms[0];
        match which {
            0 => t.m1 = FieldElement::eps_pow(Exponent::from_integer(-k)),
            1 => t.q1 = &t.q1 + &Polynomial::constant(FieldElement::from_rational(rat(1, 1)).shift(Exponent::from_integer(-1 - k))),
            _ => t.m1 = &t.m1 + &FieldElement::eps_pow(Exponent::from_integer(k + 1)),
        }
        prop_assert_eq!(verify_dickmann_certificate(&p, &cert), Ok(false));
    }
}
