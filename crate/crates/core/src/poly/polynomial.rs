use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{RationalFunction, var_cmp};
use crate::error::{Error, Result};
use crate::field::{Exponent, FieldElement, Rational, Value};

pub type Monomial = Vec<u32>;

/// Multivariate polynomial with series coefficients.
///
/// Variables are kept sorted in natural order (`x2 < x10`) and every exponent
/// vector has one entry per variable. Operations on polynomials over different
/// variable lists work over the union.
#[derive(Clone, Debug)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, FieldElement>,
}

pub(crate) fn sorted_union(a: &[String], b: &[String]) -> Vec<String> {
    let mut out: Vec<String> = a.iter().chain(b).cloned().collect();
    out.sort_by(|x, y| var_cmp(x, y));
    out.dedup();
    out
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(FieldElement::one())
    }

    pub fn constant(c: FieldElement) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_exact_zero() {
            terms.insert(Vec::new(), c);
        }
        Polynomial { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], FieldElement::one());
        Polynomial { vars: vec![name.to_string()], terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs over `vars`
    /// (any order, no duplicates).
    pub fn from_terms(
        vars: &[String],
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Result<Self> {
        let mut sorted = vars.to_vec();
        sorted.sort_by(|x, y| var_cmp(x, y));
        let before = sorted.len();
        sorted.dedup();
        if sorted.len() != before {
            return Err(Error::Invalid("duplicate variable".into()));
        }
        let perm: Vec<usize> = sorted
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("present"))
            .collect();
        let mut map: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        for (mono, c) in terms {
            if mono.len() != vars.len() {
                return Err(Error::ArityMismatch { expected: vars.len(), got: mono.len() });
            }
            let m: Monomial = perm.iter().map(|&i| mono[i]).collect();
            let entry = map.entry(m).or_insert_with(FieldElement::zero);
            *entry = &*entry + &c;
        }
        map.retain(|_, c| !c.is_exact_zero());
        Ok(Polynomial { vars: sorted, terms: map })
    }

    /// Sorted union of two variable lists.
    pub fn var_union(a: &[String], b: &[String]) -> Vec<String> {
        sorted_union(a, b)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the constant polynomial, if it is one.
    pub fn as_constant(&self) -> Option<FieldElement> {
        match self.terms.len() {
            0 => Some(FieldElement::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, mono: &[u32]) -> FieldElement {
        self.terms.get(mono).cloned().unwrap_or_else(FieldElement::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn min_total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).min().unwrap_or(0)
    }

    /// Variables that actually occur.
    pub fn used_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|m| m[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// Re-expresses the polynomial over `vars`, which must be sorted and
    /// contain every variable that occurs.
    pub fn embed(&self, vars: &[String]) -> Result<Self> {
        if vars == self.vars.as_slice() {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None if self.terms.keys().all(|m| m[i] == 0) => map.push(None),
                None => return Err(Error::UnknownVariable(v.clone())),
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = vec![0u32; vars.len()];
                for (i, target) in map.iter().enumerate() {
                    if let Some(j) = target {
                        out[*j] = m[i];
                    }
                }
                (out, c.clone())
            })
            .collect();
        Ok(Polynomial { vars: vars.to_vec(), terms })
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = sorted_union(&self.vars, &other.vars);
        (
            self.embed(&vars).expect("union contains all"),
            other.embed(&vars).expect("union contains all"),
        )
    }

    fn add_ref(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (m, c) in b.terms {
            match a.terms.get_mut(&m) {
                Some(x) => {
                    *x = &*x + &c;
                    if x.is_exact_zero() {
                        a.terms.remove(&m);
                    }
                }
                None => {
                    a.terms.insert(m, c);
                }
            }
        }
        a
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut terms: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let prod = ca * cb;
                let entry = terms.entry(m).or_insert_with(FieldElement::zero);
                *entry = &*entry + &prod;
            }
        }
        terms.retain(|_, c| !c.is_exact_zero());
        Polynomial { vars: a.vars, terms }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut terms: BTreeMap<Monomial, FieldElement> =
            self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        terms.retain(|_, c| !c.is_exact_zero());
        Polynomial { vars: self.vars.clone(), terms }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&FieldElement::from_rational(q.clone()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Polynomial::one();
        for _ in 0..n {
            result = &result * self;
        }
        result
    }

    pub fn map_coefficients(&self, f: impl Fn(&FieldElement) -> FieldElement) -> Self {
        let mut terms: BTreeMap<Monomial, FieldElement> =
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect();
        terms.retain(|_, c| !c.is_exact_zero());
        Polynomial { vars: self.vars.clone(), terms }
    }

    /// Value at a point given in the order of `vars()`.
    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.vars.len() {
            return Err(Error::ArityMismatch { expected: self.vars.len(), got: point.len() });
        }
        let mut powers: Vec<Vec<FieldElement>> = point.iter().map(|x| vec![FieldElement::one(), x.clone()]).collect();
        let mut acc = FieldElement::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = &table[table.len() - 1] * &table[1];
                    table.push(next);
                }
                t = &t * &table[e as usize];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Value at a point given as `(variable, value)` pairs over `names`.
    pub fn eval_named(&self, names: &[String], point: &[FieldElement]) -> Result<FieldElement> {
        if names.len() != point.len() {
            return Err(Error::ArityMismatch { expected: names.len(), got: point.len() });
        }
        let mut values = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match names.iter().position(|n| n == v) {
                Some(j) => values.push(point[j].clone()),
                None if self.terms.keys().all(|m| m[i] == 0) => values.push(FieldElement::zero()),
                None => return Err(Error::UnknownVariable(v.clone())),
            }
        }
        self.eval(&values)
    }

    /// Minimum coefficient valuation; `Top` for the zero polynomial.
    pub fn gauss_valuation(&self) -> Result<Value> {
        let mut best = Value::Top;
        for c in self.terms.values() {
            best = best.min(c.valuation()?);
        }
        Ok(best)
    }

    /// Whether every coefficient lies in the valuation ring.
    pub fn has_integral_coefficients(&self) -> Result<bool> {
        for c in self.terms.values() {
            if !c.is_integral()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Substitutes `images[i]` for the `i`-th variable of `vars()`.
    pub fn substitute(&self, images: &[RationalFunction]) -> Result<RationalFunction> {
        if images.len() != self.vars.len() {
            return Err(Error::ArityMismatch { expected: self.vars.len(), got: images.len() });
        }
        let mut cache: Vec<Vec<RationalFunction>> =
            images.iter().map(|r| vec![RationalFunction::one(), r.clone()]).collect();
        let mut acc = RationalFunction::zero();
        for (m, c) in &self.terms {
            let mut t = RationalFunction::from(Polynomial::constant(c.clone()));
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut cache[i];
                while table.len() <= e as usize {
                    let next = &table[table.len() - 1] * &table[1];
                    table.push(next);
                }
                t = &t * &table[e as usize];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Polynomial substitution `x_i -> images[i]`.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.vars.len() {
            return Err(Error::ArityMismatch { expected: self.vars.len(), got: images.len() });
        }
        let mut cache: Vec<Vec<Polynomial>> =
            images.iter().map(|p| vec![Polynomial::one(), p.clone()]).collect();
        let mut acc = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut cache[i];
                while table.len() <= e as usize {
                    let next = &table[table.len() - 1] * &table[1];
                    table.push(next);
                }
                t = &t * &table[e as usize];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Residue polynomial of an integral polynomial: coefficients mapped to
    /// their `eps^0` parts.
    pub fn residue_coefficients(&self) -> Result<BTreeMap<Monomial, Rational>> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let r = c.residue()?;
            if !r.is_zero() {
                out.insert(m.clone(), r);
            }
        }
        Ok(out)
    }

    /// Exactly zero after subtraction; finite-precision leftovers count as nonzero.
    pub fn identical(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// Monomials sorted for display: by total degree, then variables in order.
    fn display_order(&self) -> Vec<(&Monomial, &FieldElement)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        v
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl Eq for Polynomial {}

impl From<FieldElement> for Polynomial {
    fn from(c: FieldElement) -> Self {
        Polynomial::constant(c)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.map_coefficients(|c| -c)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                $body(self, rhs)
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                $body(&self, &rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                $body(&self, rhs)
            }
        }
        impl $trait<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                $body(self, &rhs)
            }
        }
    };
}

poly_binop!(Add, add, |a: &Polynomial, b: &Polynomial| a.add_ref(b));
poly_binop!(Sub, sub, |a: &Polynomial, b: &Polynomial| a.add_ref(&-b));
poly_binop!(Mul, mul, |a: &Polynomial, b: &Polynomial| a.mul_ref(b));

fn fmt_monomial(vars: &[String], m: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(m)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    parts.join("*")
}

/// Canonical text, e.g. `1 - eps*x^2 + (2 + eps)*x*y`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.display_order().into_iter().enumerate() {
            let mono = fmt_monomial(&self.vars, m);
            // single-term coefficients carry their sign outside
            let single = c.is_exact() && c.terms().len() == 1;
            let negative = single && c.sign().map(|s| s == Ordering::Less).unwrap_or(false);
            let mag = if negative { -c } else { c.clone() };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coef = if single { mag.to_string() } else { format!("({mag})") };
            if mono.is_empty() {
                write!(f, "{coef}")?;
            } else if single && mag == FieldElement::one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{coef}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// `eps^e` as a constant polynomial.
pub fn eps_poly(e: Exponent) -> Polynomial {
    Polynomial::constant(FieldElement::eps_pow(e))
}

pub fn rational_poly(q: Rational) -> Polynomial {
    if q.is_one() {
        Polynomial::one()
    } else {
        Polynomial::constant(FieldElement::from_rational(q))
    }
}
