use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::polynomial::sorted_union;
use super::Polynomial;
use crate::error::{Error, Result};
use crate::field::{FieldElement, Value};

/// A quotient of polynomials, kept unreduced.
///
/// Equality is the cross-multiplication identity `a*d == b*c`, so no gcd is
/// ever taken.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        // fold monomial constant denominators into the numerator
        if let Some(c) = den.as_constant() {
            if c.is_monomial() {
                let inv = c.invert().expect("nonzero monomial");
                return RationalFunction { num: num.scale(&inv), den: Polynomial::one() };
            }
        }
        if num.is_zero() {
            return RationalFunction { num, den: Polynomial::one() };
        }
        RationalFunction { num, den }
    }

    pub fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        RationalFunction { num: Polynomial::one(), den: Polynomial::one() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Polynomial::constant(c).into()
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn vars(&self) -> Vec<String> {
        sorted_union(&self.num.used_vars(), &self.den.used_vars())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this denotes, when the denominator is a constant
    /// monomial (so no truncation is involved).
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        let c = self.den.as_constant()?;
        if c == FieldElement::one() {
            return Some(self.num.clone());
        }
        c.is_monomial().then(|| self.num.scale(&c.invert().expect("nonzero")))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn pow(&self, n: u32) -> Self {
        RationalFunction { num: self.num.pow(n), den: self.den.pow(n) }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    /// Value at `point`, coordinates listed against `names`.
    pub fn eval_named(&self, names: &[String], point: &[FieldElement]) -> Result<FieldElement> {
        let d = self.den.eval_named(names, point)?;
        if d.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.num.eval_named(names, point)?;
        if let Some(q) = d.as_rational() {
            if q == num_traits::One::one() {
                return Ok(n);
            }
        }
        Ok(&n * &d.invert()?)
    }

    /// Valuation of the value at `point`, from the numerator and denominator
    /// values, without inverting anything.
    pub fn valuation_at(&self, names: &[String], point: &[FieldElement]) -> Result<Value> {
        let d = self.den.eval_named(names, point)?;
        if d.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.num.eval_named(names, point)?;
        let vd = d.valuation()?;
        if n.is_exact_zero() {
            return Ok(Value::Top);
        }
        n.valuation()?.sub(vd).ok_or(Error::DivisionByZero)
    }

    /// Gauss valuation of the numerator minus that of the denominator.
    pub fn gauss_valuation(&self) -> Result<Value> {
        let d = self.den.gauss_valuation()?;
        let n = self.num.gauss_valuation()?;
        n.sub(d).ok_or(Error::UndefinedGauss)
    }

    /// Cross-multiplication identity.
    pub fn identical(&self, other: &Self) -> bool {
        (&self.num * &other.den).identical(&(&other.num * &self.den))
    }

    /// Substitutes `images[i]` for the `i`-th entry of `names`.
    pub fn substitute(&self, names: &[String], images: &[RationalFunction]) -> Result<Self> {
        let pick = |p: &Polynomial| -> Result<RationalFunction> {
            let embedded = p.embed(&sorted_union(p.vars(), names))?;
            let imgs: Vec<RationalFunction> = embedded
                .vars()
                .iter()
                .map(|v| match names.iter().position(|n| n == v) {
                    Some(j) => images[j].clone(),
                    None => Polynomial::var(v).into(),
                })
                .collect();
            embedded.substitute(&imgs)
        };
        if names.len() != images.len() {
            return Err(Error::ArityMismatch { expected: names.len(), got: images.len() });
        }
        pick(&self.num)?.div(&pick(&self.den)?)
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }
}

impl From<FieldElement> for RationalFunction {
    fn from(c: FieldElement) -> Self {
        Self::constant(c)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.identical(other)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

fn add_rf(a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
    if a.den == b.den {
        return RationalFunction::normalized(&a.num + &b.num, a.den.clone());
    }
    RationalFunction::normalized(&a.num * &b.den + &b.num * &a.den, &a.den * &b.den)
}

fn mul_rf(a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
    RationalFunction::normalized(&a.num * &b.num, &a.den * &b.den)
}

macro_rules! rf_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                $body(self, rhs)
            }
        }
        impl $trait<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                $body(&self, &rhs)
            }
        }
        impl $trait<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                $body(&self, rhs)
            }
        }
    };
}

rf_binop!(Add, add, add_rf);
rf_binop!(Sub, sub, |a: &RationalFunction, b: &RationalFunction| add_rf(a, &-b));
rf_binop!(Mul, mul, mul_rf);

/// True when the whole of `s` sits inside one pair of parentheses.
fn enclosed(s: &str) -> bool {
    if !s.starts_with('(') {
        return false;
    }
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return i == s.len() - 1;
                }
            }
            _ => {}
        }
    }
    false
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Polynomial::one() {
            return write!(f, "{}", self.num);
        }
        let n = self.num.to_string();
        let d = self.den.to_string();
        let n = if self.num.num_terms() > 1 || n.contains(" + ") || n.contains(" - ") {
            format!("({n})")
        } else {
            n
        };
        let atom = !d.contains(['*', '/', ' ', '-', '+', '(']) || enclosed(&d);
        let d = if atom { d } else { format!("({d})") };
        write!(f, "{n}/{d}")
    }
}
