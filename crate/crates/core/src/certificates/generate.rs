use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::{check_nonneg_certificate, IntegralityWitness, NonnegCertificate};
use crate::error::{Error, Result};
use crate::field::{Exponent, FieldElement, Rational, Value};
use crate::integrality::{
    module_pushforward, pointwise_integral_oracle, polynomial_pullback, IntegralityVerdict, ProbePoints,
    SetDescriptor,
};
use crate::poly::{Polynomial, RationalFunction, RingExpr, SosExpr, TElement};
use crate::sample::SampleConfig;
use crate::sos::{psd_falsify, residue_sos_search, ResidueFraction, ResiduePolynomial, SosBudget, SosOutcome};

#[derive(Clone, Debug)]
pub struct GenerationBudget {
    pub sos: SosBudget,
    /// Most residue layers peeled off before the remainder goes into `m*h`.
    pub depth: usize,
    pub falsifier: SampleConfig,
    /// Number of halvings `u = c0/2^k` tried when writing the residue of `p`
    /// as `u(1 + sos)`.
    pub unit_attempts: u32,
}

impl Default for GenerationBudget {
    fn default() -> Self {
        GenerationBudget {
            sos: SosBudget::default(),
            depth: 3,
            falsifier: SampleConfig::default().samples(500),
            unit_attempts: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GenerationOutcome {
    Certificate(NonnegCertificate),
    NegativityWitness(Vec<FieldElement>),
    /// `p = r/(1+mh)` holds but no integrality witness for `h` was built.
    CandidateWithoutWitness { r: SosExpr, m: FieldElement, h: RationalFunction, oracle: IntegralityVerdict },
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationReport {
    pub outcome: GenerationOutcome,
    /// Gauss valuation of `p` on the unit polydisc (after pullback).
    pub gauss: Option<Value>,
    pub layers: usize,
}

fn polydisc_of(set: &SetDescriptor) -> SetDescriptor {
    SetDescriptor::unit_polydisc(set.vars())
}

fn pulled_back(p: &Polynomial, set: &SetDescriptor) -> Result<Polynomial> {
    let p = p.embed(set.vars())?;
    match set.affine_map() {
        None => Ok(p),
        Some(map) => polynomial_pullback(&p, set.vars(), map)?.embed(set.vars()),
    }
}

fn pushed(f: &RationalFunction, set: &SetDescriptor) -> Result<RationalFunction> {
    match set.affine_map() {
        None => Ok(f.clone()),
        Some(map) => module_pushforward(f, set.vars(), map),
    }
}

fn push_sos(s: &SosExpr, set: &SetDescriptor) -> Result<SosExpr> {
    Ok(SosExpr::new(s.summands().iter().map(|x| pushed(x, set)).collect::<Result<_>>()?))
}

/// Leaves are evaluated in ambient coordinates, so their sums of squares move
/// with the set; generators already do.
fn push_ring(e: &RingExpr, set: &SetDescriptor) -> Result<RingExpr> {
    Ok(match e {
        RingExpr::IOrd(s) => RingExpr::IOrd(push_sos(s, set)?),
        RingExpr::Sum(xs) => RingExpr::Sum(xs.iter().map(|x| push_ring(x, set)).collect::<Result<_>>()?),
        RingExpr::Prod(xs) => RingExpr::Prod(xs.iter().map(|x| push_ring(x, set)).collect::<Result<_>>()?),
        other => other.clone(),
    })
}

/// Searches the set for a point where `p < 0`: probe points first, then a
/// rational falsifier on the leading residue layer.
pub fn find_negative_point(
    p: &Polynomial,
    set: &SetDescriptor,
    config: &SampleConfig,
) -> Result<Option<Vec<FieldElement>>> {
    let p = p.embed(set.vars())?;
    let negative = |x: &[FieldElement]| -> bool {
        matches!(p.eval_named(set.vars(), x).and_then(|v| v.sign()), Ok(Ordering::Less))
    };
    for point in ProbePoints::new(set, config) {
        if negative(&point) {
            return Ok(Some(point));
        }
    }
    let p0 = pulled_back(&p, set)?;
    let Value::Finite(g) = p0.gauss_valuation()? else { return Ok(None) };
    let residue = ResiduePolynomial::from_polynomial(&p0.scale(&FieldElement::eps_pow(-g)))?;
    if let Some(y) = psd_falsify(&residue, config) {
        let y: Vec<FieldElement> = y.into_iter().map(FieldElement::from_rational).collect();
        let x = set.from_unit(&y);
        if set.satisfies_strict(&x).unwrap_or(false) && negative(&x) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn lift(t: &ResidueFraction, scale: &FieldElement) -> Result<RationalFunction> {
    RationalFunction::new(t.num.to_polynomial().scale(scale), t.den.to_polynomial())
}

enum Peeled {
    Negative(Vec<Rational>),
    Unknown,
    Done { summands: Vec<RationalFunction>, remainder: RationalFunction, layers: usize },
}

/// Matches residue layers of `p0` by sums of squares, lowest valuation first.
fn peel(p0: &Polynomial, gamma: Exponent, budget: &GenerationBudget) -> Result<Peeled> {
    let first = ResiduePolynomial::from_polynomial(&p0.scale(&FieldElement::eps_pow(-gamma)))?;
    let ts = match residue_sos_search(&first, &budget.sos) {
        SosOutcome::Sos(ts) => ts,
        SosOutcome::NegativityWitness(y) => return Ok(Peeled::Negative(y)),
        SosOutcome::NotSosInBudget => return Ok(Peeled::Unknown),
    };
    let half = FieldElement::eps_pow(gamma / 2);
    let mut summands: Vec<RationalFunction> = ts.iter().map(|t| lift(t, &half)).collect::<Result<_>>()?;
    let mut remainder = &RationalFunction::from(p0.clone()) - &SosExpr::new(summands.clone()).value();
    let mut layers = 1;
    while layers < budget.depth && !remainder.is_zero() {
        let Some(e) = remainder.as_polynomial() else { break };
        let Value::Finite(g) = e.gauss_valuation()? else { break };
        let layer = ResiduePolynomial::from_polynomial(&e.scale(&FieldElement::eps_pow(-g)))?;
        let SosOutcome::Sos(ts) = residue_sos_search(&layer, &budget.sos) else { break };
        let half = FieldElement::eps_pow(g / 2);
        let more: Vec<RationalFunction> = ts.iter().map(|t| lift(t, &half)).collect::<Result<_>>()?;
        remainder = &remainder - &SosExpr::new(more.clone()).value();
        summands.extend(more);
        layers += 1;
    }
    Ok(Peeled::Done { summands, remainder, layers })
}

/// `f` as a ring element: an integral polynomial in the generators, possibly
/// over a power of `1 + sum x_i^2` (a product of `1/(1+sos)` leaves).
fn ring_of(f: &RationalFunction, set: &SetDescriptor) -> Result<Option<RingExpr>> {
    let integral = |p: &Polynomial| match RingExpr::from_generator_polynomial(p, set) {
        Ok(r) => Ok(Some(r)),
        Err(Error::CoefficientsNotIntegral) => Ok(None),
        Err(e) => Err(e),
    };
    if let Some(p) = f.as_polynomial() {
        return integral(&p);
    }
    let den = f.den().embed(set.vars())?;
    let c = den.coefficient(&vec![0; set.arity()]);
    if c.is_exact_zero() || !c.is_monomial() {
        return Ok(None);
    }
    let base = set
        .vars()
        .iter()
        .fold(Polynomial::one(), |acc, v| acc + Polynomial::var(v).pow(2));
    let j = den.total_degree() / 2;
    if !den.identical(&base.pow(j).scale(&c)) {
        return Ok(None);
    }
    let Some(num) = integral(&f.num().scale(&c.invert()?))? else { return Ok(None) };
    let leaf = RingExpr::IOrd(SosExpr::from_polys(set.vars().iter().map(|v| Polynomial::var(v))));
    let mut factors = vec![num];
    factors.extend(std::iter::repeat_n(leaf, j as usize));
    Ok(Some(RingExpr::Prod(factors)))
}

/// `1 + e` as a T-element, `e` of positive Gauss valuation.
fn t_element(e: &Polynomial, extra: &[RingExpr], set: &SetDescriptor) -> Result<Option<TElement>> {
    let Value::Finite(g) = e.gauss_valuation()? else { return Ok(Some(TElement::unit())) };
    if g <= Exponent::zero() {
        return Ok(None);
    }
    let lead_sign = e
        .terms()
        .find(|(_, c)| c.valuation().ok() == Some(Value::Finite(g)))
        .and_then(|(_, c)| c.sign().ok())
        .unwrap_or(Ordering::Greater);
    let m = if lead_sign == Ordering::Less { -FieldElement::eps_pow(g) } else { FieldElement::eps_pow(g) };
    let Some(a) = integral_poly_ring(&e.scale(&m.invert()?), set)? else { return Ok(None) };
    let a = if extra.is_empty() {
        a
    } else {
        let mut f = vec![a];
        f.extend(extra.iter().cloned());
        RingExpr::Prod(f)
    };
    Ok(Some(TElement::new(m, a)))
}

fn integral_poly_ring(p: &Polynomial, set: &SetDescriptor) -> Result<Option<RingExpr>> {
    ring_of(&RationalFunction::from(p.clone()), set)
}

fn times(a: RingExpr, extra: &[RingExpr]) -> RingExpr {
    if extra.is_empty() {
        return a;
    }
    let mut f = vec![a];
    f.extend(extra.iter().cloned());
    RingExpr::Prod(f)
}

/// A witness for `h = q/pp` on the unit polydisc, where `pp` has Gauss
/// valuation zero and `q` is integral.
fn witness_for(
    pp: &Polynomial,
    q: &RationalFunction,
    set: &SetDescriptor,
    budget: &GenerationBudget,
) -> Result<Option<IntegralityWitness>> {
    let Some(qr) = ring_of(q, set)? else { return Ok(None) };
    let residue = ResiduePolynomial::from_polynomial(pp)?;
    let lifted = residue.to_polynomial().embed(set.vars())?;
    let e = pp - &lifted;
    if let Some(u) = residue.as_constant() {
        if !u.is_positive() {
            return Ok(None);
        }
        let inv = [RingExpr::Const(FieldElement::from_rational(u.recip()))];
        let inv: &[RingExpr] = if u.is_one() { &[] } else { &inv };
        let Some(den) = t_element(&e, inv, set)? else { return Ok(None) };
        return Ok(Some(IntegralityWitness::quotient(times(qr, inv), den)));
    }
    let c0 = residue.coefficient(&vec![0; residue.arity()]);
    if !c0.is_positive() {
        return Ok(None);
    }
    let mut u = c0;
    for _ in 0..budget.unit_attempts {
        // residue = u (1 + s) with s a sum of squares
        let s = (&residue - &ResiduePolynomial::constant(residue.vars(), u.clone())).scale(&u.recip());
        if let SosOutcome::Sos(ts) = residue_sos_search(&s, &budget.sos) {
            let s = SosExpr::new(ts.iter().map(|t| lift(t, &FieldElement::one())).collect::<Result<_>>()?);
            let inv = [RingExpr::Const(FieldElement::from_rational(u.recip())), RingExpr::IOrd(s)];
            let Some(den) = t_element(&e, &inv, set)? else { return Ok(None) };
            return Ok(Some(IntegralityWitness::quotient(times(qr, &inv), den)));
        }
        u /= Rational::from_integer(2.into());
    }
    Ok(None)
}

fn push_witness(w: IntegralityWitness, set: &SetDescriptor) -> Result<IntegralityWitness> {
    if set.affine_map().is_none() {
        return Ok(w);
    }
    Ok(IntegralityWitness {
        num: push_ring(&w.num, set)?,
        den: TElement::new(w.den.m.clone(), push_ring(&w.den.a, set)?),
        monic: None,
    })
}

pub fn generate_ball_certificate(
    p: &Polynomial,
    set: &SetDescriptor,
    budget: &GenerationBudget,
) -> Result<GenerationOutcome> {
    Ok(generate_ball_certificate_report(p, set, budget)?.outcome)
}

/// Best-effort `p = r/(1+mh)` on a unit polydisc or affine module.
pub fn generate_ball_certificate_report(
    p: &Polynomial,
    set: &SetDescriptor,
    budget: &GenerationBudget,
) -> Result<GenerationReport> {
    if !set.strict().is_empty() {
        return Err(Error::UnsupportedSet("generation needs a polydisc or affine module".into()));
    }
    let report = |outcome, gauss, layers| Ok(GenerationReport { outcome, gauss, layers });
    if let Some(x) = find_negative_point(p, set, &budget.falsifier)? {
        return report(GenerationOutcome::NegativityWitness(x), None, 0);
    }
    let p0 = pulled_back(p, set)?;
    let gamma = match p0.gauss_valuation()? {
        Value::Top => {
            let cert = NonnegCertificate {
                r: SosExpr::new(Vec::new()),
                m: FieldElement::zero(),
                h: RationalFunction::zero(),
                witness: IntegralityWitness::trivial(),
            };
            return report(GenerationOutcome::Certificate(cert), Some(Value::Top), 0);
        }
        Value::Finite(g) => g,
    };
    let gauss = Some(Value::Finite(gamma));
    let (summands, remainder, layers) = match peel(&p0, gamma, budget)? {
        Peeled::Negative(y) => {
            let x = set.from_unit(&y.into_iter().map(FieldElement::from_rational).collect::<Vec<_>>());
            let value = p.embed(set.vars())?.eval_named(set.vars(), &x)?;
            if value.sign()? == Ordering::Less {
                return report(GenerationOutcome::NegativityWitness(x), gauss, 0);
            }
            return report(GenerationOutcome::Unknown("residue is not PSD but no negative point was confirmed".into()), gauss, 0);
        }
        Peeled::Unknown => {
            return report(GenerationOutcome::Unknown("no residue sum of squares within budget".into()), gauss, 0)
        }
        Peeled::Done { summands, remainder, layers } => (summands, remainder, layers),
    };
    let r = push_sos(&SosExpr::new(summands), set)?;
    if remainder.is_zero() {
        let cert = NonnegCertificate {
            r,
            m: FieldElement::zero(),
            h: RationalFunction::zero(),
            witness: IntegralityWitness::trivial(),
        };
        return report(GenerationOutcome::Certificate(cert), gauss, layers);
    }
    let q = -remainder;
    let Value::Finite(gq) = q.gauss_valuation()? else { unreachable!("nonzero remainder") };
    if gq <= gamma {
        return report(GenerationOutcome::Unknown("remainder does not lie above the leading layer".into()), gauss, layers);
    }
    let m_unit = FieldElement::eps_pow(gq - gamma);
    let scale = FieldElement::eps_pow(gamma);
    let pp = p0.scale(&scale.invert()?);
    let qq = q.scale(&(&scale * &m_unit).invert()?);
    let h = pushed(&qq.div(&RationalFunction::from(pp.clone()))?, set)?;
    let unit_set = polydisc_of(set);
    if let Some(w) = witness_for(&pp, &qq, &unit_set, budget)? {
        let cert = NonnegCertificate { r: r.clone(), m: m_unit.clone(), h: h.clone(), witness: push_witness(w, set)? };
        if check_nonneg_certificate(p, &cert, set).is_ok() {
            return report(GenerationOutcome::Certificate(cert), gauss, layers);
        }
    }
    let oracle = pointwise_integral_oracle(&h, set, &budget.falsifier);
    report(GenerationOutcome::CandidateWithoutWitness { r, m: m_unit, h, oracle }, gauss, layers)
}
