mod common;

use common::*;
use proptest::prelude::*;
use rcvf_core::field::Exponent;
use rcvf_core::integrality::{
    generic_type_integral, infinitesimal_decompose, module_pullback, pointwise_integral_oracle,
};
use rcvf_core::sample::Sampler;
use rcvf_core::{AffineModuleMap, FieldElement, IntegralityVerdict, RationalFunction, SampleConfig, SetDescriptor, Value};

fn zero() -> Value {
    Value::Finite(Exponent::from_integer(0))
}

fn affine_map(n: usize) -> impl Strategy<Value = AffineModuleMap> {
    (prop::collection::vec(element_in(-2, 3), n), prop::collection::vec(laurent_in(-2, 3).prop_filter("nonzero", |s| !s.is_exact_zero()), n))
        .prop_map(|(c, s)| AffineModuleMap::new(c, s).expect("nonzero scales"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gauss_negative_verdicts_have_counterexamples(p in nonzero_polynomial(2, 3), seed in 0u64..1000) {
        let set = SetDescriptor::unit_polydisc(&vars(2));
        let h: RationalFunction = p.clone().into();
        if !generic_type_integral(&h, &set).unwrap() {
            let sampler = Sampler::new(SampleConfig::with_seed(seed));
            let found = (0..100).any(|i| {
                p.eval(&sampler.generic_point(i, 2, p.num_terms())).unwrap().valuation().unwrap() < zero()
            });
            prop_assert!(found);
        }
    }

    #[test]
    fn pullback_coherence(p in polynomial(2, 3), d in polynomial(2, 1), map in affine_map(2), seed in 0u64..1000) {
        let x = vars(2);
        let den = &d + &rcvf_core::Polynomial::one();
        prop_assume!(!den.is_zero());
        let h = RationalFunction::new(p, den).unwrap();
        let g = module_pullback(&h, &x, &map).unwrap();
        let sampler = Sampler::new(SampleConfig::with_seed(seed));
        for i in 0..5 {
            let y = sampler.ball_point(i, 2);
            let b = map.from_unit(&y);
            if i == 0 {
                for (u, v) in map.to_unit(&b).unwrap().iter().zip(&y) {
                    prop_assert!((u - v).terms().is_empty());
                }
            }
            // h(b) = g(y) as an exact cross-multiplied identity
            let lhs = &h.num().eval_named(&x, &b).unwrap() * &g.den().eval_named(&x, &y).unwrap();
            let rhs = &g.num().eval_named(&x, &y).unwrap() * &h.den().eval_named(&x, &b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn decompose_round_trip(p in nonzero_polynomial(2, 3), shift in 1i64..5) {
        let set = SetDescriptor::unit_polydisc(&vars(2));
        let g0 = p.gauss_valuation().unwrap().finite().unwrap();
        let h: RationalFunction = p.scale(&FieldElement::eps_pow(Exponent::from_integer(shift) - g0)).into();
        let (m, g) = infinitesimal_decompose(&h, &set).unwrap();
        prop_assert!(m.valuation().unwrap() > zero());
        prop_assert_eq!(g.gauss_valuation().unwrap(), zero());
        prop_assert_eq!(g.scale(&m), h);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn gauss_positive_verdicts_hold_pointwise(p in polynomial(2, 3), seed in 0u64..1000) {
        let set = SetDescriptor::unit_polydisc(&vars(2));
        let g = p.gauss_valuation().unwrap();
        let h: RationalFunction = match g {
            Value::Finite(e) if e < Exponent::from_integer(0) => p.scale(&FieldElement::eps_pow(-e)).into(),
            _ => p.into(),
        };
        prop_assert!(generic_type_integral(&h, &set).unwrap());
        let verdict = pointwise_integral_oracle(&h, &set, &SampleConfig::with_seed(seed).samples(1000));
        let no_counterexample = matches!(verdict, IntegralityVerdict::NoCounterexampleFound { .. });
        prop_assert!(no_counterexample, "{:?}", verdict);
    }
}
