use super::{Polynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::integrality::SetDescriptor;

/// Largest multiset of constraint factors a cone term may carry.
pub const DEFAULT_CONE_DEGREE_CAP: usize = 8;

/// `sum s_i^2`. An empty list is normalized to `[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SosExpr {
    summands: Vec<RationalFunction>,
}

impl SosExpr {
    pub fn new(summands: Vec<RationalFunction>) -> Self {
        if summands.is_empty() {
            SosExpr { summands: vec![RationalFunction::zero()] }
        } else {
            SosExpr { summands }
        }
    }

    pub fn from_polys(summands: impl IntoIterator<Item = Polynomial>) -> Self {
        Self::new(summands.into_iter().map(RationalFunction::from).collect())
    }

    pub fn summands(&self) -> &[RationalFunction] {
        &self.summands
    }

    pub fn value(&self) -> RationalFunction {
        self.summands
            .iter()
            .fold(RationalFunction::zero(), |acc, s| &acc + &(s * s))
    }

    pub fn eval(&self, names: &[String], point: &[FieldElement]) -> Result<FieldElement> {
        let mut acc = FieldElement::zero();
        for s in &self.summands {
            let v = s.eval_named(names, point)?;
            acc = &acc + &(&v * &v);
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeTerm {
    pub sos: SosExpr,
    /// Multiset of indices into the set's strict constraints.
    pub factors: Vec<usize>,
}

/// `sum sigma_A * prod_{i in A} p_i`, an element of the pre-order generated by
/// the strict constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeExpr {
    pub terms: Vec<ConeTerm>,
}

impl ConeExpr {
    pub fn new(terms: Vec<ConeTerm>) -> Self {
        ConeExpr { terms }
    }

    fn check(&self, constraints: usize, degree_cap: usize) -> Option<String> {
        for t in &self.terms {
            if t.factors.len() > degree_cap {
                return Some(format!("cone term of degree {} exceeds cap {degree_cap}", t.factors.len()));
            }
            if let Some(i) = t.factors.iter().find(|&&i| i >= constraints) {
                return Some(format!("cone factor index {i} out of range"));
            }
        }
        None
    }

    pub fn value(&self, constraints: &[Polynomial]) -> Result<RationalFunction> {
        let mut acc = RationalFunction::zero();
        for t in &self.terms {
            let mut prod = t.sos.value();
            for &i in &t.factors {
                let p = constraints
                    .get(i)
                    .ok_or_else(|| Error::Invalid(format!("cone factor index {i} out of range")))?;
                prod = &prod * &RationalFunction::from(p.clone());
            }
            acc = &acc + &prod;
        }
        Ok(acc)
    }

    pub fn eval(&self, set: &SetDescriptor, point: &[FieldElement]) -> Result<FieldElement> {
        let names = set.vars();
        let mut acc = FieldElement::zero();
        for t in &self.terms {
            let mut prod = t.sos.eval(names, point)?;
            for &i in &t.factors {
                let p = set
                    .strict()
                    .get(i)
                    .ok_or_else(|| Error::Invalid(format!("cone factor index {i} out of range")))?;
                prod = &prod * &p.eval_named(names, point)?;
            }
            acc = &acc + &prod;
        }
        Ok(acc)
    }
}

/// An element of the ring generated over the valuation ring by the set's
/// generators and the `1/(1+sos)` / `1/(1+cone)` leaf families.
///
/// There is no division node: the only reciprocals are the two leaf kinds.
#[derive(Clone, Debug, PartialEq)]
pub enum RingExpr {
    /// A constant of the valuation ring.
    Const(FieldElement),
    /// The `i`-th generator of the set (`x_i` on the unit polydisc).
    Gen(usize),
    /// `1/(1+r)` for a sum of squares `r`.
    IOrd(SosExpr),
    /// `1/(1+f)` for `f` in the cone of the strict constraints.
    ICone(ConeExpr),
    Sum(Vec<RingExpr>),
    Prod(Vec<RingExpr>),
}

impl RingExpr {
    pub fn constant(c: FieldElement) -> Self {
        RingExpr::Const(c)
    }

    pub fn one() -> Self {
        RingExpr::Const(FieldElement::one())
    }

    pub fn zero() -> Self {
        RingExpr::Const(FieldElement::zero())
    }

    /// First structural violation for `set`, if any.
    pub fn membership_violation(&self, set: &SetDescriptor) -> Option<String> {
        match self {
            RingExpr::Const(c) => match c.is_integral() {
                Ok(true) => None,
                Ok(false) => Some(format!("constant {c} is not integral")),
                Err(e) => Some(format!("constant {c}: {e}")),
            },
            RingExpr::Gen(i) if *i < set.arity() => None,
            RingExpr::Gen(i) => Some(format!("generator index {i} out of range")),
            RingExpr::IOrd(_) => None,
            RingExpr::ICone(c) => {
                if set.strict().is_empty() {
                    Some("cone leaf on a set without strict constraints".into())
                } else {
                    c.check(set.strict().len(), DEFAULT_CONE_DEGREE_CAP)
                }
            }
            RingExpr::Sum(xs) | RingExpr::Prod(xs) => {
                xs.iter().find_map(|x| x.membership_violation(set))
            }
        }
    }

    pub fn verify_membership(&self, set: &SetDescriptor) -> bool {
        self.membership_violation(set).is_none()
    }

    /// The rational function this denotes.
    pub fn to_rational(&self, set: &SetDescriptor) -> Result<RationalFunction> {
        Ok(match self {
            RingExpr::Const(c) => RationalFunction::constant(c.clone()),
            RingExpr::Gen(i) => set
                .generators()
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("generator index {i} out of range")))?,
            RingExpr::IOrd(s) => (&RationalFunction::one() + &s.value()).recip()?,
            RingExpr::ICone(c) => (&RationalFunction::one() + &c.value(set.strict())?).recip()?,
            RingExpr::Sum(xs) => {
                let mut acc = RationalFunction::zero();
                for x in xs {
                    acc = &acc + &x.to_rational(set)?;
                }
                acc
            }
            RingExpr::Prod(xs) => {
                let mut acc = RationalFunction::one();
                for x in xs {
                    acc = &acc * &x.to_rational(set)?;
                }
                acc
            }
        })
    }

    /// Pointwise value; leaves are evaluated directly at `point`.
    pub fn eval(&self, set: &SetDescriptor, point: &[FieldElement]) -> Result<FieldElement> {
        Ok(match self {
            RingExpr::Const(c) => c.clone(),
            RingExpr::Gen(i) => set.generator_value(*i, point)?,
            RingExpr::IOrd(s) => (FieldElement::one() + s.eval(set.vars(), point)?).invert()?,
            RingExpr::ICone(c) => (FieldElement::one() + c.eval(set, point)?).invert()?,
            RingExpr::Sum(xs) => {
                let mut acc = FieldElement::zero();
                for x in xs {
                    acc = &acc + &x.eval(set, point)?;
                }
                acc
            }
            RingExpr::Prod(xs) => {
                let mut acc = FieldElement::one();
                for x in xs {
                    acc = &acc * &x.eval(set, point)?;
                    if acc.is_exact_zero() {
                        break;
                    }
                }
                acc
            }
        })
    }

    /// Writes a polynomial in the generators (variable `i` of `set.vars()`
    /// standing for generator `i`) as a ring expression. Coefficients must be
    /// integral.
    pub fn from_generator_polynomial(p: &Polynomial, set: &SetDescriptor) -> Result<Self> {
        let p = p.embed(set.vars())?;
        let mut terms = Vec::new();
        for (mono, c) in p.terms() {
            if !c.is_integral()? {
                return Err(Error::CoefficientsNotIntegral);
            }
            let mut factors = Vec::new();
            if *c != FieldElement::one() || mono.iter().all(|&e| e == 0) {
                factors.push(RingExpr::Const(c.clone()));
            }
            for (i, &e) in mono.iter().enumerate() {
                factors.extend(std::iter::repeat_n(RingExpr::Gen(i), e as usize));
            }
            terms.push(if factors.len() == 1 {
                factors.pop().expect("one factor")
            } else {
                RingExpr::Prod(factors)
            });
        }
        Ok(match terms.len() {
            0 => RingExpr::zero(),
            1 => terms.pop().expect("one term"),
            _ => RingExpr::Sum(terms),
        })
    }

    pub fn node_count(&self) -> usize {
        match self {
            RingExpr::Sum(xs) | RingExpr::Prod(xs) => 1 + xs.iter().map(|x| x.node_count()).sum::<usize>(),
            _ => 1,
        }
    }

    pub fn is_zero_constant(&self) -> bool {
        matches!(self, RingExpr::Const(c) if c.is_exact_zero())
    }
}

/// `1 + m*a` with `m` in the maximal ideal and `a` a ring element.
#[derive(Clone, Debug, PartialEq)]
pub struct TElement {
    pub m: FieldElement,
    pub a: RingExpr,
}

impl TElement {
    pub fn new(m: FieldElement, a: RingExpr) -> Self {
        TElement { m, a }
    }

    /// The element `1`.
    pub fn unit() -> Self {
        TElement { m: FieldElement::zero(), a: RingExpr::zero() }
    }

    pub fn violation(&self, set: &SetDescriptor) -> Option<String> {
        match self.m.is_infinitesimal() {
            Ok(true) => {}
            Ok(false) => return Some(format!("T-element multiplier {} is not infinitesimal", self.m)),
            Err(e) => return Some(format!("T-element multiplier: {e}")),
        }
        self.a.membership_violation(set)
    }

    pub fn is_well_formed(&self, set: &SetDescriptor) -> bool {
        self.violation(set).is_none()
    }

    pub fn value(&self, set: &SetDescriptor) -> Result<RationalFunction> {
        if self.m.is_exact_zero() {
            return Ok(RationalFunction::one());
        }
        Ok(&RationalFunction::one() + &self.a.to_rational(set)?.scale(&self.m))
    }

    pub fn eval(&self, set: &SetDescriptor, point: &[FieldElement]) -> Result<FieldElement> {
        if self.m.is_exact_zero() {
            return Ok(FieldElement::one());
        }
        Ok(FieldElement::one() + &self.m * &self.a.eval(set, point)?)
    }
}
