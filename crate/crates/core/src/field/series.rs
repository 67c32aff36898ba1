use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{exact_sqrt, fmt_rational, Rational};
use super::{default_precision, exponent_denominator_cap, Exponent, Value};
use crate::error::{Error, Result};

/// A truncated Puiseux series `sum c_e eps^e + O(eps^N)`.
///
/// Terms are kept sorted by exponent with nonzero coefficients, all below the
/// precision bound `N`. `precision == None` means the series is exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    terms: Vec<(Exponent, Rational)>,
    precision: Option<Exponent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

fn min_prec(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_prec(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

/// Evaluates a coefficient recurrence on the exponents `< rho` of the monoid
/// generated by the exponents of `t`, in increasing order. `step` sees every
/// smaller coefficient already computed.
fn monoid_recurrence(
    t: &FieldElement,
    rho: Exponent,
    mut step: impl FnMut(Exponent, &BTreeMap<Exponent, Rational>) -> Rational,
) -> BTreeMap<Exponent, Rational> {
    let mut known: BTreeMap<Exponent, Rational> = BTreeMap::new();
    let mut frontier: BTreeSet<Exponent> = BTreeSet::new();
    frontier.insert(Exponent::zero());
    while let Some(e) = frontier.pop_first() {
        let c = step(e, &known);
        known.insert(e, c);
        for (f, _) in &t.terms {
            let next = e + f;
            if next < rho {
                frontier.insert(next);
            }
        }
    }
    known
}

impl FieldElement {
    pub fn new(
        terms: impl IntoIterator<Item = (Exponent, Rational)>,
        precision: Option<Exponent>,
    ) -> Self {
        let mut map: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if precision.is_some_and(|p| e >= p) {
                continue;
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        Self::from_sorted(map.into_iter().filter(|(_, c)| !c.is_zero()).collect(), precision)
    }

    fn from_sorted(terms: Vec<(Exponent, Rational)>, precision: Option<Exponent>) -> Self {
        FieldElement { terms, precision }
    }

    pub fn zero() -> Self {
        Self::from_sorted(Vec::new(), None)
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// The infinitesimal `eps`.
    pub fn eps() -> Self {
        Self::monomial(Rational::one(), Exponent::one())
    }

    pub fn eps_pow(e: Exponent) -> Self {
        Self::monomial(Rational::one(), e)
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::monomial(q, Exponent::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn monomial(c: Rational, e: Exponent) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self::from_sorted(vec![(e, c)], None)
        }
    }

    /// The unknown quantity `O(eps^e)`.
    pub fn big_o(e: Exponent) -> Self {
        Self::from_sorted(Vec::new(), Some(e))
    }

    pub fn terms(&self) -> &[(Exponent, Rational)] {
        &self.terms
    }

    pub fn precision(&self) -> Option<Exponent> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_none()
    }

    /// True for exact series with a single term `c eps^e`.
    pub fn is_monomial(&self) -> bool {
        self.is_exact() && self.terms.len() == 1
    }

    /// Exact rational value, if the series is an exact constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if !self.is_exact() {
            return None;
        }
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(e, c)] if e.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coefficient(&self, e: Exponent) -> Rational {
        self.terms
            .iter()
            .find(|(x, _)| *x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Leading `(exponent, coefficient)`, failing when nothing is visible.
    pub fn leading(&self) -> Result<(Exponent, &Rational)> {
        match (self.terms.first(), self.precision) {
            (Some((e, c)), _) => Ok((*e, c)),
            (None, None) => Err(Error::DivisionByZero),
            (None, Some(p)) => Err(Error::PrecisionExhausted(p)),
        }
    }

    /// Best known lower bound for the valuation; `None` for exact zero.
    pub fn valuation_lower_bound(&self) -> Option<Exponent> {
        match self.terms.first() {
            Some((e, _)) => Some(*e),
            None => self.precision,
        }
    }

    pub fn valuation(&self) -> Result<Value> {
        match (self.terms.first(), self.precision) {
            (Some((e, _)), _) => Ok(Value::Finite(*e)),
            (None, None) => Ok(Value::Top),
            (None, Some(p)) => Err(Error::PrecisionExhausted(p)),
        }
    }

    pub fn sign(&self) -> Result<Ordering> {
        match (self.terms.first(), self.precision) {
            (Some((_, c)), _) => Ok(if c.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }),
            (None, None) => Ok(Ordering::Equal),
            (None, Some(p)) => Err(Error::PrecisionExhausted(p)),
        }
    }

    /// Order comparison; `eps` is a positive infinitesimal.
    pub fn compare(&self, other: &FieldElement) -> Result<Ordering> {
        (self - other).sign()
    }

    /// Coefficient of `eps^0` of an element of the valuation ring.
    pub fn residue(&self) -> Result<Rational> {
        match self.terms.first() {
            Some((e, _)) if *e < Exponent::zero() => Err(Error::NotIntegral(*e)),
            Some(_) => Ok(self.coefficient(Exponent::zero())),
            None => match self.precision {
                None => Ok(Rational::zero()),
                Some(p) if p > Exponent::zero() => Ok(Rational::zero()),
                Some(p) => Err(Error::PrecisionExhausted(p)),
            },
        }
    }

    /// Membership in the valuation ring (valuation >= 0).
    pub fn is_integral(&self) -> Result<bool> {
        match (self.terms.first(), self.precision) {
            (Some((e, _)), _) => Ok(*e >= Exponent::zero()),
            (None, None) => Ok(true),
            (None, Some(p)) if p >= Exponent::zero() => Ok(true),
            (None, Some(p)) => Err(Error::PrecisionExhausted(p)),
        }
    }

    /// Membership in the maximal ideal (valuation > 0, or zero).
    pub fn is_infinitesimal(&self) -> Result<bool> {
        match (self.terms.first(), self.precision) {
            (Some((e, _)), _) => Ok(*e > Exponent::zero()),
            (None, None) => Ok(true),
            (None, Some(p)) if p > Exponent::zero() => Ok(true),
            (None, Some(p)) => Err(Error::PrecisionExhausted(p)),
        }
    }

    /// Drops terms at or beyond `p` and records `O(eps^p)`.
    pub fn truncate(&self, p: Exponent) -> Self {
        let precision = min_prec(self.precision, Some(p));
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| precision.is_none_or(|q| *e < q))
            .cloned()
            .collect();
        Self::from_sorted(terms, precision)
    }

    /// Forgets the precision bound, treating the known terms as exact.
    pub fn without_precision(&self) -> Self {
        Self::from_sorted(self.terms.clone(), None)
    }

    /// Multiplication by `eps^e`.
    pub fn shift(&self, e: Exponent) -> Self {
        Self::from_sorted(
            self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
            self.precision.map(|p| p + e),
        )
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self::from_sorted(
            self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
            self.precision,
        )
    }

    fn add_ref(&self, other: &Self) -> Self {
        let precision = min_prec(self.precision, other.precision);
        let below = |e: &Exponent| precision.is_none_or(|p| *e < p);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let pick = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            let (e, c) = match pick {
                Ordering::Less => {
                    i += 1;
                    (a[i - 1].0, a[i - 1].1.clone())
                }
                Ordering::Greater => {
                    j += 1;
                    (b[j - 1].0, b[j - 1].1.clone())
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (a[i - 1].0, &a[i - 1].1 + &b[j - 1].1)
                }
            };
            if !below(&e) {
                break;
            }
            if !c.is_zero() {
                out.push((e, c));
            }
        }
        Self::from_sorted(out, precision)
    }

    fn neg_ref(&self) -> Self {
        Self::from_sorted(
            self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            self.precision,
        )
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero();
        }
        let precision = min_prec(
            add_prec(self.precision, other.valuation_lower_bound()),
            add_prec(other.precision, self.valuation_lower_bound()),
        );
        let mut map: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if precision.is_some_and(|p| e >= p) {
                    break;
                }
                *map.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Self::from_sorted(
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            precision,
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Field operation with the exponent-denominator cap enforced.
    pub fn arith(op: ArithOp, a: &Self, b: &Self) -> Result<Self> {
        let r = match op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
        };
        r.check_exponent_cap()?;
        Ok(r)
    }

    pub fn max_exponent_denominator(&self) -> i64 {
        self.terms
            .iter()
            .map(|(e, _)| *e.denom())
            .chain(self.precision.map(|p| *p.denom()))
            .max()
            .unwrap_or(1)
    }

    pub fn check_exponent_cap(&self) -> Result<()> {
        let cap = exponent_denominator_cap();
        let d = self.max_exponent_denominator();
        if d > cap {
            Err(Error::ExponentBlowup { denominator: d, cap })
        } else {
            Ok(())
        }
    }

    /// Splits a nonzero element as `c eps^v (1 + tail)`, with `tail` carrying
    /// the relative precision of `self`.
    fn unit_split(&self) -> Result<(Exponent, Rational, FieldElement)> {
        let (v, c) = self.leading()?;
        let c = c.clone();
        let inv_c = c.recip();
        let tail = Self::from_sorted(
            self.terms[1..]
                .iter()
                .map(|(e, x)| (e - v, x * &inv_c))
                .collect(),
            self.precision.map(|p| p - v),
        );
        Ok((v, c, tail))
    }

    /// Inverse with the default number of kept orders.
    pub fn invert(&self) -> Result<Self> {
        self.invert_to(Exponent::from_integer(default_precision()))
    }

    /// Inverse keeping `rel` orders past the leading term.
    pub fn invert_to(&self, rel: Exponent) -> Result<Self> {
        let (v, c, tail) = self.unit_split()?;
        let inv_c = c.recip();
        if tail.is_exact_zero() {
            return Ok(Self::monomial(inv_c, -v));
        }
        let rho = min_prec(tail.precision, Some(rel)).expect("finite");
        let t = tail.truncate(rho);
        // b_e = -sum_f t_f b_(e-f) over the monoid spanned by the tail exponents
        let coeffs = monoid_recurrence(&t, rho, |e, known| {
            if e.is_zero() {
                return Rational::one();
            }
            let mut acc = Rational::zero();
            for (f, tf) in &t.terms {
                if *f > e {
                    break;
                }
                if let Some(b) = known.get(&(e - f)) {
                    acc -= tf * b;
                }
            }
            acc
        });
        let acc = Self::from_sorted(coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(), Some(rho));
        Ok(acc.scale(&inv_c).shift(-v))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.sqrt_to(Exponent::from_integer(default_precision()))
    }

    /// Square root of a non-negative element whose leading coefficient is a
    /// rational square; `rel` orders are kept past the leading term.
    pub fn sqrt_to(&self, rel: Exponent) -> Result<Self> {
        if self.is_exact_zero() {
            return Ok(Self::zero());
        }
        if self.sign()? == Ordering::Less {
            return Err(Error::NegativeElement);
        }
        let (v, c, tail) = self.unit_split()?;
        let root_c = exact_sqrt(&c).ok_or_else(|| Error::NonSquareLeadingCoefficient(fmt_rational(&c)))?;
        let half = v / 2;
        let lead = Self::monomial(root_c.clone(), half);
        lead.check_exponent_cap()?;
        if tail.is_exact_zero() {
            return Ok(lead);
        }
        let rho = min_prec(tail.precision, Some(rel)).expect("finite");
        let t = tail.truncate(rho);
        // s_e = (t_e - sum_{0<f<e} s_f s_(e-f)) / 2
        let two = Rational::from_integer(2.into());
        let coeffs = monoid_recurrence(&t, rho, |e, known| {
            if e.is_zero() {
                return Rational::one();
            }
            // pairs (f, e-f) with 0 < f < e counted once from each side
            let mut cross = Rational::zero();
            let half_e = e / 2;
            for (f, sf) in known.range(..=half_e) {
                if f.is_zero() || sf.is_zero() {
                    continue;
                }
                if let Some(sg) = known.get(&(e - f)) {
                    if *f == half_e {
                        cross += sf * sg;
                    } else {
                        cross += (sf * sg) * &two;
                    }
                }
            }
            (t.coefficient(e) - cross) / &two
        });
        let acc = Self::from_sorted(coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(), Some(rho));
        let root = acc.scale(&root_c).shift(half);
        root.check_exponent_cap()?;
        // an exact square root of a finite series ends at half its last exponent
        let fits = |r: &Self| match (r.terms.last(), self.terms.last()) {
            (Some((a, _)), Some((b, _))) => *a * 2 <= *b,
            _ => true,
        };
        if self.is_exact() && fits(&root) {
            let candidate = root.without_precision();
            if &candidate * &candidate == *self {
                return Ok(candidate);
            }
        }
        Ok(root)
    }
}

impl From<Rational> for FieldElement {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                $body(self, rhs)
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                $body(&self, &rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                $body(&self, rhs)
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &FieldElement, b: &FieldElement| a.add_ref(b));
forward_binop!(Sub, sub, |a: &FieldElement, b: &FieldElement| a.add_ref(&b.neg_ref()));
forward_binop!(Mul, mul, |a: &FieldElement, b: &FieldElement| a.mul_ref(b));

fn fmt_eps_power(e: &Exponent) -> String {
    if e.is_one() {
        "eps".to_string()
    } else if e.is_integer() && *e > Exponent::zero() {
        format!("eps^{}", e.numer())
    } else {
        format!("eps^({e})")
    }
}

/// Canonical text: terms by increasing exponent, e.g. `3 - 1/2*eps^(3/2) + O(eps^4)`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return match self.precision {
                None => write!(f, "0"),
                Some(p) => write!(f, "O({})", fmt_eps_power(&p)),
            };
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", fmt_eps_power(e))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), fmt_eps_power(e))?;
            }
        }
        if let Some(p) = self.precision {
            write!(f, " + O({})", fmt_eps_power(&p))?;
        }
        Ok(())
    }
}
