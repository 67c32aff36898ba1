//! Quick checks of the documented examples, run by `rcvf selftest`.

use rcvf_core::certificates::{
    check_general_characterization, generate_ball_certificate, verify_dickmann_certificate, CharacterizationVerdict,
    DickmannCertificate, DickmannTerm, GenerationBudget, GenerationOutcome,
};
use rcvf_core::integrality::{generic_type_integral, pointwise_integral_oracle};
use rcvf_core::sos::{residue_sos_search, ResiduePolynomial, SosBudget, SosOutcome};
use rcvf_core::syntax::{parse_field_element, parse_polynomial, parse_rational_function};
use rcvf_core::{Error, FieldElement, IntegralityVerdict, SampleConfig, SetDescriptor};

pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

fn ball(vars: &[&str]) -> SetDescriptor {
    SetDescriptor::unit_polydisc(&vars.iter().map(|v| v.to_string()).collect::<Vec<_>>())
}

type CheckFn = fn(u64) -> Result<bool, Error>;

fn valuation_order(_: u64) -> Result<bool, Error> {
    let a = parse_field_element("eps^2")?;
    let b = parse_field_element("eps + eps^3")?;
    Ok(a.compare(&b)? == std::cmp::Ordering::Less && b.valuation()? <= a.valuation()?)
}

fn sqrt_leading(_: u64) -> Result<bool, Error> {
    let s = parse_field_element("4*eps^2 + eps^3")?.sqrt()?;
    Ok(s.leading()?.1 == &rcvf_core::field::rat(2, 1))
}

fn divergence(seed: u64) -> Result<bool, Error> {
    let h = parse_rational_function("(x+eps)/x")?;
    let set = ball(&["x"]);
    let gauss = generic_type_integral(&h, &set)?;
    let v = pointwise_integral_oracle(&h, &set, &SampleConfig::with_seed(seed).samples(200));
    Ok(gauss && matches!(v, IntegralityVerdict::CounterexampleFound { .. }))
}

fn sos_quadratic(_: u64) -> Result<bool, Error> {
    let q = ResiduePolynomial::from_polynomial(&parse_polynomial("x^2 - 2*x*y + 2*y^2")?)?;
    Ok(matches!(residue_sos_search(&q, &SosBudget::default()), SosOutcome::Sos(_)))
}

fn certificate(seed: u64) -> Result<bool, Error> {
    let budget = GenerationBudget { falsifier: SampleConfig::with_seed(seed).samples(200), ..Default::default() };
    let out = generate_ball_certificate(&parse_polynomial("1 - eps*x^2")?, &ball(&["x"]), &budget)?;
    Ok(matches!(out, GenerationOutcome::Certificate(c) if c.m == FieldElement::eps()))
}

fn falsify(seed: u64) -> Result<bool, Error> {
    let budget = GenerationBudget { falsifier: SampleConfig::with_seed(seed).samples(200), ..Default::default() };
    let out = generate_ball_certificate(&parse_polynomial("eps - x^2")?, &ball(&["x"]), &budget)?;
    Ok(matches!(out, GenerationOutcome::NegativityWitness(b) if b == vec![FieldElement::one()]))
}

fn dickmann(_: u64) -> Result<bool, Error> {
    let cert = DickmannCertificate {
        terms: vec![DickmannTerm {
            m1: FieldElement::eps(),
            q1: parse_polynomial("x")?,
            m2: FieldElement::zero(),
            q2: parse_polynomial("0")?,
        }],
    };
    verify_dickmann_certificate(&parse_polynomial("1 + eps*x^2")?, &cert)
}

fn characterization(seed: u64) -> Result<bool, Error> {
    let config = SampleConfig::with_seed(seed).samples(100);
    let set = ball(&["x"]);
    let pos = check_general_characterization(&parse_polynomial("x^2")?, &set, &config)?;
    let neg = check_general_characterization(&parse_polynomial("eps - x^2")?, &set, &config)?;
    Ok(pos.verdict == CharacterizationVerdict::ConsistentNonneg
        && matches!(neg.verdict, CharacterizationVerdict::NegativityWitness { .. }))
}

const CHECKS: [(&str, CheckFn); 8] = [
    ("order-and-valuation", valuation_order),
    ("square-root", sqrt_leading),
    ("gauss-pointwise-divergence", divergence),
    ("residue-sos", sos_quadratic),
    ("certificate-generation", certificate),
    ("falsification", falsify),
    ("dickmann", dickmann),
    ("characterization-probe", characterization),
];

pub fn run_checks(seed: u64) -> Vec<Check> {
    CHECKS
        .iter()
        .map(|(name, f)| match f(seed) {
            Ok(ok) => Check { name, ok, detail: String::new() },
            Err(e) => Check { name, ok: false, detail: e.to_string() },
        })
        .collect()
}
